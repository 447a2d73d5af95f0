#include "oracle.hpp"

#include <functional>
#include <random>
#include <sstream>

namespace stripsplus::testing {

namespace {

ObjectId value_of(VariableRef r, const Values& v, std::size_t nx) {
  return r.is_explicit() ? v[r.index - 1] : v[nx + r.index - 1];
}

GroundAtom ground(const LiftedAtom& a, const Values& v, std::size_t nx, const std::vector<ObjectId>& fill) {
  GroundAtom g;
  g.pred = a.predicate;
  std::size_t f = 0;
  for (std::size_t i = 0; i < a.args.size(); ++i) g.args[i] = a.args[i].is_free() ? fill[f++] : value_of(a.args[i], v, nx);
  return g;
}

}  // namespace

bool brute_atom(const LiftedAtom& a, const Values& v, std::size_t nx, const std::set<GroundAtom>& state,
                const PositionDomains& dom) {
  std::vector<std::size_t> free_pos;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (a.args[i].is_free()) free_pos.push_back(i);
  std::vector<ObjectId> fill(free_pos.size());
  // any filling of the free slots from their domains that is in the state
  bool witnessed = false;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (witnessed) return;
    if (k == free_pos.size()) {
      if (state.count(ground(a, v, nx, fill))) witnessed = true;
      return;
    }
    for (ObjectId o = 0; o < dom.num_objects(); ++o) {
      if (!dom.contains(a.predicate, free_pos[k], o)) continue;
      fill[k] = o;
      rec(k + 1);
    }
  };
  rec(0);
  return a.positive() ? witnessed : !witnessed;
}

std::set<Values> brute_solutions(const std::vector<LiftedAtom>& atoms, Values v, std::size_t nx,
                                 const std::vector<std::size_t>& targets, const std::set<GroundAtom>& state,
                                 const PositionDomains& dom) {
  std::set<Values> out;
  auto typed = [&](std::size_t var, ObjectId o) {
    for (const auto& a : atoms)
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const auto r = a.args[i];
        if (r.is_free()) continue;
        std::size_t id = r.is_explicit() ? r.index - 1 : nx + r.index - 1;
        if (id == var && !dom.contains(a.predicate, i, o)) return false;
      }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == targets.size()) {
      for (const auto& a : atoms)
        if (!brute_atom(a, v, nx, state, dom)) return;
      Values proj;
      for (auto t : targets) proj.push_back(v[t]);
      out.insert(proj);
      return;
    }
    for (ObjectId o = 0; o < dom.num_objects(); ++o) {
      if (!typed(targets[k], o)) continue;
      v[targets[k]] = o;
      rec(k + 1);
    }
    v[targets[k]] = kNoObject;
  };
  rec(0);
  return out;
}

BruteOutcome brute_plus(const ActionSchema& schema, const Values& args, const std::set<GroundAtom>& state,
                        const PositionDomains& dom) {
  const std::size_t nx = schema.params.size();
  const std::size_t nz = schema.binding.size();
  Values v(nx + nz, kNoObject);
  std::copy(args.begin(), args.end(), v.begin());
  BruteOutcome res;
  // applicable if some choice of stratum values completes; a fault when such
  // a completion passes through a stratum with several values
  std::function<bool(std::size_t)> rec = [&](std::size_t k) {
    if (k == nz) {
      for (const auto& a : schema.pre)
        if (!brute_atom(a, v, nx, state, dom)) return false;
      return true;
    }
    auto sols = brute_solutions(schema.binding.strata[k].atoms, v, nx, {nx + k}, state, dom);
    for (const auto& s : sols) {
      v[nx + k] = s[0];
      if (rec(k + 1)) {
        if (sols.size() > 1) res.fault = true;
        return true;
      }
    }
    v[nx + k] = kNoObject;
    return false;
  };
  if (rec(0) && !res.fault) {
    res.applicable = true;
    res.z.assign(v.begin() + static_cast<long>(nx), v.end());
  }
  return res;
}

std::set<GroundAtom> brute_successor(const ActionSchema& schema, const Values& args, const Values& z,
                                     const std::set<GroundAtom>& state) {
  Values v = args;
  v.insert(v.end(), z.begin(), z.end());
  const std::size_t nx = args.size();
  std::set<GroundAtom> out = state;
  for (const auto& a : schema.del) out.erase(ground(a, v, nx, {}));
  for (const auto& a : schema.add) out.insert(ground(a, v, nx, {}));
  return out;
}

bool naive_strips_applicable(const ActionSchema& schema, const Values& args, const std::set<GroundAtom>& state) {
  for (const auto& a : schema.pre)
    if (!state.count(ground(a, args, args.size(), {}))) return false;
  return true;
}

std::set<GroundAtom> as_set(const State& s) { return {s.atoms().begin(), s.atoms().end()}; }

AgreementResult evaluator_agreement(std::size_t cases, std::uint64_t seed, std::size_t max_objects) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  AgreementResult res;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = 2 + pick(max_objects - 1);
    const std::size_t np = 1 + pick(4);
    std::vector<PredicateSig> preds;
    std::vector<std::vector<std::vector<ObjectId>>> per(np);
    for (std::size_t p = 0; p < np; ++p) {
      PredicateSig sig{"p" + std::to_string(p), std::vector<TypeSet>(pick(4))};
      for (std::size_t pos = 0; pos < sig.arity(); ++pos) {
        std::vector<ObjectId> d;
        for (ObjectId o = 0; o < n; ++o)
          if (pick(10) < 7) d.push_back(o);
        per[p].push_back(d);
      }
      preds.push_back(sig);
    }
    PositionDomains dom(per, n);
    std::vector<GroundAtom> atoms;
    for (std::size_t p = 0; p < np; ++p) {
      const std::size_t count = preds[p].arity() == 0 ? pick(2) : pick(2 * n + 1);
      for (std::size_t i = 0; i < count; ++i) {
        GroundAtom g;
        g.pred = static_cast<PredId>(p);
        for (std::size_t pos = 0; pos < preds[p].arity(); ++pos) {
          const auto& d = per[p][pos];
          // mostly well-typed, sometimes not
          g.args[pos] = (d.empty() || pick(10) == 0) ? static_cast<ObjectId>(pick(n)) : d[pick(d.size())];
        }
        atoms.push_back(g);
      }
    }
    State state(atoms);
    const auto set = as_set(state);

    const std::vector<VariableRef> slots = {VariableRef::x(1), VariableRef::x(2), VariableRef::z(1),
                                            VariableRef::z(2), VariableRef::free()};
    std::vector<LiftedAtom> query(1 + pick(4));
    bool uses_z[2] = {false, false};
    for (auto& a : query) {
      a.predicate = static_cast<PredId>(pick(np));
      a.polarity = pick(10) < 3 ? Polarity::Negative : Polarity::Positive;
      for (std::size_t pos = 0; pos < preds[a.predicate].arity(); ++pos) {
        a.args.push_back(slots[pick(slots.size())]);
        if (a.args.back().is_implicit()) uses_z[a.args.back().index - 1] = true;
      }
    }
    Assignment fixed;
    fixed.set(VariableRef::x(1), static_cast<ObjectId>(pick(n)));
    fixed.set(VariableRef::x(2), static_cast<ObjectId>(pick(n)));
    std::vector<VariableRef> targets;
    std::vector<std::size_t> target_ids;
    for (int j = 0; j < 2; ++j)
      if (uses_z[j]) {
        targets.push_back(VariableRef::z(j + 1));
        target_ids.push_back(2 + static_cast<std::size_t>(j));
      }

    StateIndex index(state, np);
    EvalContext ctx{index, dom};
    std::set<Values> engine;
    for (const auto& a : satisfying_assignments(query, ctx, fixed, targets)) {
      Values v;
      for (auto t : targets) v.push_back(a.get(t));
      engine.insert(v);
    }
    Values v = {fixed.get(VariableRef::x(1)), fixed.get(VariableRef::x(2)), kNoObject, kNoObject};
    const auto brute = brute_solutions(query, v, 2, target_ids, set, dom);
    ++res.cases;
    if (!brute.empty()) ++res.nonempty;
    if (engine == brute) {
      ++res.agree;
    } else if (res.first_failure.empty()) {
      std::ostringstream out;
      out << "case " << c << ": query";
      for (const auto& a : query) out << ' ' << render_pattern(a, preds);
      out << " engine " << engine.size() << " brute " << brute.size();
      res.first_failure = out.str();
    }
  }
  return res;
}

DenotationCheck compare_denotations(const std::vector<std::vector<std::string>>& expected, const Domain& learned,
                                    const Trace& trace, const std::string& action, bool exact_count) {
  DenotationCheck res;
  const ActionSchema* schema = learned.find_schema(action);
  if (!schema) {
    res.detail = "no learned action " + action;
    return res;
  }
  if (exact_count ? schema->binding.size() != expected.size() : schema->binding.size() < expected.size()) {
    res.detail = "learned " + std::to_string(schema->binding.size()) + " strata, expected " +
                 std::to_string(expected.size());
    return res;
  }
  std::vector<std::vector<LiftedAtom>> strata;
  for (const auto& q : expected) {
    strata.emplace_back();
    for (const auto& t : q) strata.back().push_back(parse_pattern(t, learned.predicates));
  }
  const PositionDomains dom = build_position_domains(learned.predicates, learned.types, trace.objects);
  const PredicateMap to_learned(trace.predicates, learned.predicates);
  const std::size_t nx = schema->arity();
  for (std::size_t k = 0; k < trace.length(); ++k) {
    const auto& a = trace.steps[k].action;
    if (a.name != action) continue;
    ++res.occurrences;
    const auto set = as_set(to_learned.apply(trace.state_before(k)));
    const BruteOutcome got = brute_plus(*schema, a.args, set, dom);
    if (!got.applicable) {
      res.detail = "learned query not satisfied at step " + std::to_string(k);
      return res;
    }
    Values v(nx + expected.size(), kNoObject);
    std::copy(a.args.begin(), a.args.end(), v.begin());
    for (std::size_t j = 0; j < strata.size(); ++j) {
      auto sols = brute_solutions(strata[j], v, nx, {nx + j}, set, dom);
      if (sols.size() != 1) {
        res.detail = "expected stratum " + std::to_string(j + 1) + " has " + std::to_string(sols.size()) +
                     " values at step " + std::to_string(k);
        return res;
      }
      v[nx + j] = (*sols.begin())[0];
      if (v[nx + j] != got.z[j]) {
        res.detail = "stratum " + std::to_string(j + 1) + " denotes " + trace.objects.names[v[nx + j]] +
                     ", learned " + trace.objects.names[got.z[j]] + " at step " + std::to_string(k);
        return res;
      }
    }
  }
  res.ok = res.occurrences > 0;
  if (!res.ok) res.detail = "no occurrences";
  return res;
}

}  // namespace stripsplus::testing
