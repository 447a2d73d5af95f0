#include "stripsplus/tracegen.hpp"

#include <algorithm>
#include <set>

#include "stripsplus/rng.hpp"

namespace stripsplus {

FullWalk generate_walk(const Problem& problem, const Domain& domain, std::size_t length, std::uint64_t seed,
                       std::span<const std::string> dropped) {
  std::set<std::string> drop(dropped.begin(), dropped.end());
  for (const auto& d : drop)
    if (!domain.find_predicate(d)) throw Error("cannot drop unknown predicate " + d);
  CompiledDomain cd(domain, problem.objects);
  Rng rng(seed);
  FullWalk walk;
  walk.full_states.push_back(ground_init(problem));
  std::vector<GroundAction> actions;
  bool dead_end = false;
  for (std::size_t k = 0; k < length; ++k) {
    const State& s = walk.full_states.back();
    auto app = cd.enumerate_applicable(s);
    if (app.empty()) {
      dead_end = true;
      break;
    }
    auto& pick = app[rng.below(app.size())];
    auto next = cd.apply(s, pick);
    if (!next) throw Error("internal: enumerated action " + pick.name + " is not applicable");
    actions.push_back(std::move(pick));
    walk.full_states.push_back(std::move(*next));
  }

  Trace& t = walk.trace;
  t.version = 1;
  t.domain_name = domain.name;
  t.seed = seed;
  t.objects = problem.objects;
  t.dropped.assign(drop.begin(), drop.end());
  t.dead_end = dead_end;
  std::vector<bool> appears(domain.predicates.size(), false);
  for (const auto& s : walk.full_states)
    for (const auto& a : s.atoms()) appears[a.pred] = true;
  for (std::size_t p = 0; p < domain.predicates.size(); ++p) {
    const auto& sig = domain.predicates[p];
    if (!appears[p] || drop.contains(sig.name)) continue;
    t.predicates.push_back({sig.name, std::vector<TypeSet>(sig.arity())});
  }
  PredicateMap map(domain.predicates, t.predicates);
  t.init = map.apply(walk.full_states.front());
  for (std::size_t k = 0; k < actions.size(); ++k)
    t.steps.push_back({std::move(actions[k]), map.apply(walk.full_states[k + 1])});
  return walk;
}

Trace generate_trace(const Problem& problem, const Domain& domain, std::size_t length, std::uint64_t seed,
                     std::span<const std::string> dropped) {
  return std::move(generate_walk(problem, domain, length, seed, dropped).trace);
}

std::vector<GroundAction> enumerate_applicable(const Domain& domain, const ObjectTable& objects, const State& s) {
  CompiledDomain cd(domain, objects);
  return cd.enumerate_applicable(s);
}

}  // namespace stripsplus
