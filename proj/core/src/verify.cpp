#include "stripsplus/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "stripsplus/rng.hpp"

namespace stripsplus {

const char* to_string(MismatchKind k) {
  switch (k) {
    case MismatchKind::ApplicabilityPlus:
      return "applicability+";
    case MismatchKind::ApplicabilityMinus:
      return "applicability-";
    case MismatchKind::Effect:
      return "effect";
    case MismatchKind::Structural:
      return "structural";
    case MismatchKind::Fault:
      return "fault";
  }
  return "?";
}

std::uint64_t state_digest(const State& s, std::span<const PredicateSig> preds, const ObjectTable& objects) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& a : sorted_atom_strings(s, preds, objects)) {
    for (unsigned char c : a) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= ' ';
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<State> sample_states(const Problem& problem, const Domain& hidden, std::size_t count,
                                 std::size_t walk_length, std::uint64_t seed) {
  std::vector<State> out;
  if (count == 0) return out;
  CompiledDomain cd(hidden, problem.objects);
  Rng rng(seed);
  const State init = ground_init(problem);
  State cur = init;
  std::size_t steps = 0;
  while (out.size() < count) {
    out.push_back(cur);
    auto app = steps < walk_length ? cd.enumerate_applicable(cur) : std::vector<GroundAction>{};
    if (app.empty()) {
      cur = init;
      steps = 0;
      continue;
    }
    cur = *cd.apply(cur, app[rng.below(app.size())]);
    ++steps;
  }
  return out;
}

Comparator::Comparator(const Problem& problem, const Domain& hidden, const Domain& learned)
    : problem_(&problem),
      hidden_(hidden, problem.objects),
      learned_(learned, problem.objects),
      to_learned_(hidden.predicates, learned.predicates) {}

std::string Comparator::render(const GroundAction& a) const {
  std::string out = a.name;
  for (auto o : a.args) out += " " + problem_->objects.names[o];
  return out;
}

std::optional<Mismatch> Comparator::compare(const State& hs, const GroundAction& a) const {
  const State ls = to_learned_.apply(hs);
  auto fail = [&](MismatchKind k, std::string detail) {
    Mismatch m;
    m.digest = state_digest(ls, learned_.domain().predicates, problem_->objects);
    m.action = render(a);
    m.kind = k;
    m.detail = std::move(detail);
    return m;
  };
  std::optional<State> h;
  try {
    h = hidden_.apply(hs, a);
  } catch (const ModelIntegrityFault& f) {
    return fail(MismatchKind::Fault, std::string("hidden ") + f.what());
  }
  if (!learned_.find(a.name)) {
    if (h) return fail(MismatchKind::Structural, "action missing from the learned domain");
    return std::nullopt;
  }
  std::optional<State> l;
  try {
    l = learned_.apply(ls, a);
  } catch (const ModelIntegrityFault& f) {
    return fail(MismatchKind::Fault, std::string("learned ") + f.what());
  }
  if (h.has_value() != l.has_value())
    return fail(h ? MismatchKind::ApplicabilityMinus : MismatchKind::ApplicabilityPlus,
                h ? "applicable in hidden only" : "applicable in learned only");
  if (!h) return std::nullopt;
  if (to_learned_.apply(*h) != *l) return fail(MismatchKind::Effect, "successor states differ");
  return std::nullopt;
}

std::pair<std::size_t, std::vector<Mismatch>> Comparator::compare_on_state(const State& hs) const {
  std::size_t pairs = 0;
  std::vector<Mismatch> bad;
  const auto& dom = hidden_.domain();
  for (std::size_t k = 0; k < dom.schemas.size(); ++k) {
    const std::size_t n = dom.schemas[k].params.size();
    std::vector<ObjectId> tuple(n);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == n) {
        ++pairs;
        if (auto m = compare(hs, {dom.schemas[k].name, tuple})) bad.push_back(std::move(*m));
        return;
      }
      for (auto o : hidden_.param_objects(k, i)) {
        if (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(i), o) !=
            tuple.begin() + static_cast<std::ptrdiff_t>(i))
          continue;
        tuple[i] = o;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  std::sort(bad.begin(), bad.end());
  return {pairs, std::move(bad)};
}

std::vector<GroundAction> Comparator::interesting_groundings(const State& hs, const std::string& action) const {
  std::set<std::vector<ObjectId>> found;
  auto collect = [&](const CompiledDomain& cd, const State& s) {
    const CompiledSchema* cs = cd.find(action);
    if (!cs) return;
    std::size_t k = static_cast<std::size_t>(cs - &cd.schema(0));
    StateIndex idx(s, cd.domain().predicates.size());
    EvalContext ctx{idx, cd.domains()};
    std::vector<std::vector<ObjectId>> per;
    for (std::size_t i = 0; i < cs->schema().params.size(); ++i) per.push_back(cd.param_objects(k, i));
    std::vector<std::vector<ObjectId>> tuples;
    cs->candidate_tuples(ctx, per, tuples);
    for (auto& t : tuples) {
      try {
        if (cs->applicable(ctx, t)) found.insert(t);
      } catch (const ModelIntegrityFault&) {
        found.insert(t);
      }
    }
  };
  collect(hidden_, hs);
  collect(learned_, to_learned_.apply(hs));
  std::vector<GroundAction> out;
  for (const auto& t : found) out.push_back({action, t});
  std::sort(out.begin(), out.end(), [&](const GroundAction& a, const GroundAction& b) {
    return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end(),
                                        [&](ObjectId x, ObjectId y) {
                                          return problem_->objects.names[x] < problem_->objects.names[y];
                                        });
  });
  return out;
}

VerifyReport verify_equivalence(const Problem& problem, const Domain& hidden, const Domain& learned,
                                const VerifyOptions& options) {
  VerifyReport rep;
  if (options.pairs == 0 || hidden.schemas.empty()) return rep;
  Comparator cmp(problem, hidden, learned);
  const std::size_t na = hidden.schemas.size();
  std::vector<std::size_t> quota(na, options.pairs / na);
  for (std::size_t i = 0; i < options.pairs % na; ++i) ++quota[i];
  const std::size_t n_states = *std::max_element(quota.begin(), quota.end());
  auto states = sample_states(problem, hidden, n_states, options.walk_length, options.seed);
  rep.states = states.size();
  Rng rng(options.seed ^ 0x9E3779B97F4A7C15ull);
  for (const auto& s : states) {
    for (std::size_t k = 0; k < na; ++k) {
      if (quota[k] == 0) continue;
      --quota[k];
      const auto& name = hidden.schemas[k].name;
      auto cands = cmp.interesting_groundings(s, name);
      GroundAction a;
      if (!cands.empty()) {
        a = cands[rng.below(cands.size())];
      } else {
        a.name = name;
        const std::size_t n = hidden.schemas[k].params.size();
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const auto& objs = cmp.hidden().param_objects(k, i);
          ok = !objs.empty();
          if (ok) a.args.push_back(objs[rng.below(objs.size())]);
        }
      }
      ++rep.pairs_tested;
      if (auto m = cmp.compare(s, a)) {
        rep.mismatches.push_back(std::move(*m));
      } else {
        ++rep.matches;
      }
    }
  }
  std::sort(rep.mismatches.begin(), rep.mismatches.end());
  return rep;
}

std::string render_verify_report(const VerifyReport& r) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", r.score());
  out << "pairs " << r.pairs_tested << "\nmatches " << r.matches << "\nstates " << r.states << "\nscore " << buf
      << "\n";
  for (const auto& m : r.mismatches) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(m.digest));
    out << "mismatch " << buf << " " << to_string(m.kind) << " (" << m.action << ") " << m.detail << "\n";
  }
  return out.str();
}

VerifyReport compare_successor_sets(const Problem& problem, const Domain& strips, const Domain& learned,
                                    std::size_t n_states, std::uint64_t seed, std::size_t walk_length) {
  VerifyReport rep;
  auto states = sample_states(problem, strips, n_states, walk_length, seed);
  rep.states = states.size();
  CompiledDomain hd(strips, problem.objects);
  CompiledDomain ld(learned, problem.objects);
  PredicateMap map(strips.predicates, learned.predicates);
  for (const auto& s : states) {
    const State ls = map.apply(s);
    std::set<std::string> names;
    for (const auto& sc : strips.schemas) names.insert(sc.name);
    for (const auto& sc : learned.schemas) names.insert(sc.name);
    std::vector<GroundAction> ha = hd.enumerate_applicable(s);
    std::vector<GroundAction> la;
    std::string fault;
    try {
      la = ld.enumerate_applicable(ls);
    } catch (const ModelIntegrityFault& f) {
      fault = f.what();
    }
    for (const auto& name : names) {
      ++rep.pairs_tested;
      std::set<std::vector<GroundAtom>> hs, lsucc;
      for (const auto& a : ha)
        if (a.name == name) {
          auto n = map.apply(*hd.apply(s, a));
          hs.insert({n.atoms().begin(), n.atoms().end()});
        }
      for (const auto& a : la)
        if (a.name == name) {
          auto n = *ld.apply(ls, a);
          lsucc.insert({n.atoms().begin(), n.atoms().end()});
        }
      if (fault.empty() && hs == lsucc) {
        ++rep.matches;
      } else {
        rep.mismatches.push_back({state_digest(ls, learned.predicates, problem.objects), name,
                                  fault.empty() ? MismatchKind::Effect : MismatchKind::Fault,
                                  fault.empty() ? "successor sets differ" : fault});
      }
    }
  }
  std::sort(rep.mismatches.begin(), rep.mismatches.end());
  return rep;
}

}  // namespace stripsplus
