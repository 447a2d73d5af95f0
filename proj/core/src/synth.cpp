#include "stripsplus/synth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace stripsplus {

const char* to_string(TestVerdict v) {
  switch (v) {
    case TestVerdict::Valid:
      return "valid";
    case TestVerdict::NotValid:
      return "not-valid";
    case TestVerdict::NotDetermined:
      return "not-determined";
    case TestVerdict::Subsumed:
      return "subsumed";
  }
  return "?";
}

LearningData::LearningData(std::span<const Trace> traces) : traces_(traces) {
  if (traces.empty()) throw Error("no training traces");
  std::map<std::string, std::size_t> arity;
  for (const auto& t : traces)
    for (const auto& p : t.predicates) {
      auto [it, fresh] = arity.emplace(p.name, p.arity());
      if (!fresh && it->second != p.arity()) throw Error("predicate " + p.name + " has two arities across traces");
    }
  for (const auto& [name, n] : arity) predicates_.push_back({name, std::vector<TypeSet>(n)});

  std::vector<std::vector<std::set<std::string>>> labels(predicates_.size());
  info_.observed.resize(predicates_.size());
  for (std::size_t p = 0; p < predicates_.size(); ++p) {
    labels[p].resize(predicates_[p].arity());
    info_.observed[p].resize(predicates_[p].arity());
  }
  for (std::size_t t = 0; t < traces.size(); ++t) {
    PredicateMap map(traces[t].predicates, predicates_);
    auto scan = [&](const State& s) {
      for (const auto& a : s.atoms()) {
        auto p = *map.map(a.pred);
        for (std::size_t pos = 0; pos < predicates_[p].arity(); ++pos) {
          labels[p][pos].insert(traces[t].objects.types[a.args[pos]]);
          if (t == 0) info_.observed[p][pos].push_back(a.args[pos]);
        }
      }
    };
    scan(traces[t].init);
    for (const auto& st : traces[t].steps) scan(st.state);
  }
  info_.labels.resize(predicates_.size());
  for (std::size_t p = 0; p < predicates_.size(); ++p)
    for (std::size_t pos = 0; pos < predicates_[p].arity(); ++pos) {
      TypeSet l(labels[p][pos].begin(), labels[p][pos].end());
      predicates_[p].position_types[pos] = l;
      info_.labels[p].push_back(std::move(l));
      auto& obs = info_.observed[p][pos];
      std::sort(obs.begin(), obs.end());
      obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
    }
  for (const auto& t : traces)
    indexed_.push_back(
        std::make_unique<IndexedTrace>(t, predicates_, build_position_domains(predicates_, {}, t.objects)));
}

std::vector<std::string> LearningData::all_labels() const {
  std::set<std::string> all;
  for (const auto& p : predicates_)
    for (const auto& ts : p.position_types) all.insert(ts.begin(), ts.end());
  for (const auto& t : traces_)
    for (const auto& st : t.steps)
      for (auto o : st.action.args) all.insert(t.objects.types[o]);
  return {all.begin(), all.end()};
}

ActionLearner::ActionLearner(const LearningData& data, OccurrenceSet occ) : data_(&data), occ_(std::move(occ)) {
  if (occ_.empty()) throw Error("action " + occ_.action + " has no occurrences");
  nx_ = occ_.pairs.front().args.size();
  zvals_.assign(occ_.pairs.size(), {});
}

std::vector<std::string> ActionLearner::var_labels(VariableRef v) const {
  std::set<std::string> out;
  for (std::size_t o = 0; o < occ_.pairs.size(); ++o) {
    const auto& occ = occ_.pairs[o];
    ObjectId obj = v.is_explicit() ? occ.args[v.index - 1] : zvals_[o][v.index - 1];
    out.insert(data_->traces()[occ.trace].objects.types[obj]);
  }
  return {out.begin(), out.end()};
}

bool ActionLearner::slot_compatible(PredId p, std::size_t pos, VariableRef v) const {
  if (v.is_free()) return true;
  if (v.is_implicit() && v.index > binding_.size()) return true;
  const auto& labels = v.is_explicit() ? labels_cache_[0][v.index - 1] : labels_cache_[1][v.index - 1];
  const auto& allowed = data_->predicates()[p].position_types[pos];
  for (const auto& l : labels)
    if (std::binary_search(allowed.begin(), allowed.end(), l)) return true;
  return false;
}

namespace {

// All slot tuples of length k over `options`.
template <typename F>
void for_each_tuple(std::size_t k, const std::vector<VariableRef>& options, F&& f) {
  std::vector<VariableRef> cur(k);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      f(cur);
      return;
    }
    for (auto v : options) {
      cur[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<LiftedAtom> ActionLearner::candidate_space() const {
  const int next = static_cast<int>(binding_.size() + 1);
  labels_cache_.assign(2, {});
  for (std::size_t i = 0; i < nx_; ++i) labels_cache_[0].push_back(var_labels(VariableRef::x(static_cast<int>(i + 1))));
  for (std::size_t j = 0; j < binding_.size(); ++j)
    labels_cache_[1].push_back(var_labels(VariableRef::z(static_cast<int>(j + 1))));
  std::vector<VariableRef> options;
  for (std::size_t i = 0; i < nx_; ++i) options.push_back(VariableRef::x(static_cast<int>(i + 1)));
  for (int j = 1; j <= next; ++j) options.push_back(VariableRef::z(j));
  options.push_back(VariableRef::free());
  const VariableRef znew = VariableRef::z(next);
  std::vector<LiftedAtom> out;
  const auto& preds = data_->predicates();
  for (std::size_t p = 0; p < preds.size(); ++p) {
    const std::size_t k = preds[p].arity();
    if (k == 0) continue;
    for_each_tuple(k, options, [&](const std::vector<VariableRef>& slots) {
      if (std::find(slots.begin(), slots.end(), znew) == slots.end()) return;
      for (std::size_t pos = 0; pos < k; ++pos)
        if (!slot_compatible(static_cast<PredId>(p), pos, slots[pos])) return;
      for (auto pol : {Polarity::Positive, Polarity::Negative}) out.push_back({static_cast<PredId>(p), slots, pol});
    });
  }
  return canonical_atom_order(std::move(out));
}

bool ActionLearner::instance_constant(const std::vector<LiftedAtom>& candidate, int var) const {
  const std::size_t nz = binding_.size() + 1;
  // Occurrence values already differ within one trace: not constant.
  std::map<std::size_t, ObjectId> first;
  std::vector<CompiledQuery> strata;
  for (std::size_t j = 0; j < binding_.size(); ++j) {
    VariableRef t = VariableRef::z(static_cast<int>(j + 1));
    strata.emplace_back(binding_.strata[j].atoms, nx_, nz, std::span<const VariableRef>(&t, 1));
  }
  VariableRef target = VariableRef::z(var);
  CompiledQuery cq(candidate, nx_, nz, std::span<const VariableRef>(&target, 1));
  std::map<std::size_t, std::set<std::vector<ObjectId>>> tuples;
  std::vector<ObjectId> values(nx_ + nz, kNoObject);
  std::vector<std::vector<ObjectId>> out;
  for (std::size_t o = 0; o < occ_.pairs.size(); ++o) {
    const auto& occ = occ_.pairs[o];
    tuples[occ.trace].insert(occ.args);
    std::copy(occ.args.begin(), occ.args.end(), values.begin());
    std::copy(zvals_[o].begin(), zvals_[o].end(), values.begin() + static_cast<std::ptrdiff_t>(nx_));
    values[nx_ + nz - 1] = kNoObject;
    cq.solve(data_->indexed(occ.trace).ctx(occ.step), values, 2, &out);
    if (out.size() != 1) return false;
    auto [it, fresh] = first.emplace(occ.trace, out[0][0]);
    if (!fresh && it->second != out[0][0]) return false;
  }
  std::size_t evaluable = 0;
  for (const auto& [t, tset] : tuples) {
    const auto& it = data_->indexed(t);
    ObjectId constant = first.at(t);
    for (const auto& tuple : tset) {
      for (std::size_t k = 0; k < it.num_states(); ++k) {
        auto ctx = it.ctx(k);
        std::fill(values.begin(), values.end(), kNoObject);
        std::copy(tuple.begin(), tuple.end(), values.begin());
        bool ok = true;
        for (std::size_t j = 0; j < strata.size() && ok; ++j) {
          strata[j].solve(ctx, values, 2, &out);
          if (out.size() != 1) {
            ok = false;
          } else {
            values[nx_ + j] = out[0][0];
          }
        }
        if (!ok) continue;
        cq.solve(ctx, values, 2, &out);
        if (out.size() != 1) continue;
        if (out[0][0] != constant) return false;
        ++evaluable;
      }
    }
  }
  return evaluable >= 2;
}

TestVerdict ActionLearner::test(const std::vector<LiftedAtom>& candidate) {
  const std::size_t nz = binding_.size() + 1;
  const int var = static_cast<int>(nz);
  VariableRef target = VariableRef::z(var);
  CompiledQuery q(candidate, nx_, nz, std::span<const VariableRef>(&target, 1));
  std::vector<ObjectId> values(nx_ + nz, kNoObject);
  std::vector<std::vector<ObjectId>> out;
  std::vector<ObjectId> denot(occ_.pairs.size(), kNoObject);
  bool nd = false;
  for (std::size_t o = 0; o < occ_.pairs.size(); ++o) {
    const auto& occ = occ_.pairs[o];
    std::copy(occ.args.begin(), occ.args.end(), values.begin());
    std::copy(zvals_[o].begin(), zvals_[o].end(), values.begin() + static_cast<std::ptrdiff_t>(nx_));
    values[nx_ + nz - 1] = kNoObject;
    std::size_t n = q.solve(data_->indexed(occ.trace).ctx(occ.step), values, 2, &out);
    if (n == 0) return TestVerdict::NotValid;
    if (n >= 2) nd = true;
    else denot[o] = out[0][0];
  }
  if (nd) return TestVerdict::NotDetermined;
  for (std::size_t v = 0; v < nx_ + nz - 1; ++v) {
    bool same = true;
    for (std::size_t o = 0; o < occ_.pairs.size() && same; ++o) {
      ObjectId other = v < nx_ ? occ_.pairs[o].args[v] : zvals_[o][v - nx_];
      same = other == denot[o];
    }
    if (same) return TestVerdict::Subsumed;
  }
  if (instance_constant(candidate, var)) {
    pruned_.push_back(candidate);
    return TestVerdict::Subsumed;
  }
  return TestVerdict::Valid;
}

std::optional<Subquery> ActionLearner::expand(std::size_t max_atoms) {
  const auto singles = candidate_space();
  const std::size_t nz = binding_.size() + 1;
  const std::size_t n_occ = occ_.pairs.size();
  VariableRef target = VariableRef::z(static_cast<int>(nz));
  std::vector<ObjectId> values(nx_ + nz, kNoObject);

  // Every slot other than the new variable is bound or an independent free
  // slot, so a conjunction's denotation set is the intersection of its
  // atoms' sets. Singles are evaluated once; conjunctions intersect.
  auto make = [&](const std::vector<std::size_t>& ids) {
    Subquery q;
    q.introduces = static_cast<int>(nz);
    for (auto i : ids) q.atoms.push_back(singles[i]);
    return q;
  };
  std::vector<std::vector<std::vector<ObjectId>>> sets;  // [nd single][occ]
  std::vector<std::size_t> nd_ids;
  auto classify = [&](const std::vector<std::vector<ObjectId>>& per_occ,
                      const std::vector<std::size_t>& ids) -> TestVerdict {
    bool nd = false;
    for (const auto& s : per_occ) {
      if (s.empty()) return TestVerdict::NotValid;
      if (s.size() >= 2) nd = true;
    }
    if (nd) return TestVerdict::NotDetermined;
    for (std::size_t v = 0; v < nx_ + nz - 1; ++v) {
      bool same = true;
      for (std::size_t o = 0; o < n_occ && same; ++o) {
        ObjectId other = v < nx_ ? occ_.pairs[o].args[v] : zvals_[o][v - nx_];
        same = other == per_occ[o][0];
      }
      if (same) return TestVerdict::Subsumed;
    }
    auto q = make(ids);
    if (instance_constant(q.atoms, static_cast<int>(nz))) {
      pruned_.push_back(q.atoms);
      return TestVerdict::Subsumed;
    }
    return TestVerdict::Valid;
  };

  std::vector<std::vector<ObjectId>> per_occ(n_occ), out;
  for (std::size_t i = 0; i < singles.size(); ++i) {
    std::vector<LiftedAtom> one{singles[i]};
    CompiledQuery q(one, nx_, nz, std::span<const VariableRef>(&target, 1));
    bool empty = false;
    for (std::size_t o = 0; o < n_occ && !empty; ++o) {
      const auto& occ = occ_.pairs[o];
      std::copy(occ.args.begin(), occ.args.end(), values.begin());
      std::copy(zvals_[o].begin(), zvals_[o].end(), values.begin() + static_cast<std::ptrdiff_t>(nx_));
      values[nx_ + nz - 1] = kNoObject;
      q.solve(data_->indexed(occ.trace).ctx(occ.step), values, 0, &out);
      per_occ[o].clear();
      for (const auto& p : out) per_occ[o].push_back(p[0]);
      std::sort(per_occ[o].begin(), per_occ[o].end());
      empty = per_occ[o].empty();
    }
    if (empty) continue;
    auto v = classify(per_occ, {i});
    if (v == TestVerdict::Valid) return make({i});
    if (v == TestVerdict::NotDetermined) {
      nd_ids.push_back(i);
      sets.push_back(per_occ);
    }
  }

  // Frontier entries index into nd_ids.
  std::vector<std::vector<std::size_t>> frontier;
  for (std::size_t k = 0; k < nd_ids.size(); ++k) frontier.push_back({k});
  std::vector<ObjectId> tmp;
  for (std::size_t level = 2; level <= max_atoms && !frontier.empty(); ++level) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& conj : frontier) {
      for (std::size_t k = conj.back() + 1; k < nd_ids.size(); ++k) {
        bool empty = false;
        for (std::size_t o = 0; o < n_occ && !empty; ++o) {
          per_occ[o] = sets[conj[0]][o];
          for (std::size_t m = 1; m <= conj.size(); ++m) {
            const auto& other = m < conj.size() ? sets[conj[m]][o] : sets[k][o];
            tmp.clear();
            std::set_intersection(per_occ[o].begin(), per_occ[o].end(), other.begin(), other.end(),
                                  std::back_inserter(tmp));
            per_occ[o].swap(tmp);
            if (per_occ[o].empty()) break;
          }
          empty = per_occ[o].empty();
        }
        if (empty) continue;
        std::vector<std::size_t> ids;
        for (auto c : conj) ids.push_back(nd_ids[c]);
        ids.push_back(nd_ids[k]);
        auto v = classify(per_occ, ids);
        if (v == TestVerdict::Valid) return make(ids);
        if (v == TestVerdict::NotDetermined && level < max_atoms) {
          auto grown = conj;
          grown.push_back(k);
          next.push_back(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

void ActionLearner::push_stratum(Subquery q) {
  const std::size_t nz = binding_.size() + 1;
  q.introduces = static_cast<int>(nz);
  q.atoms = canonical_atom_order(std::move(q.atoms));
  VariableRef target = VariableRef::z(static_cast<int>(nz));
  CompiledQuery cq(q.atoms, nx_, nz, std::span<const VariableRef>(&target, 1));
  std::vector<ObjectId> values(nx_ + nz, kNoObject);
  std::vector<std::vector<ObjectId>> out;
  for (std::size_t o = 0; o < occ_.pairs.size(); ++o) {
    const auto& occ = occ_.pairs[o];
    std::copy(occ.args.begin(), occ.args.end(), values.begin());
    std::copy(zvals_[o].begin(), zvals_[o].end(), values.begin() + static_cast<std::ptrdiff_t>(nx_));
    values[nx_ + nz - 1] = kNoObject;
    if (cq.solve(data_->indexed(occ.trace).ctx(occ.step), values, 2, &out) != 1)
      throw Error("action " + occ_.action + ": pushed stratum is not unique at every occurrence");
    zvals_[o].push_back(out[0][0]);
  }
  binding_.strata.push_back(std::move(q));
}

void ActionLearner::synthesize(std::size_t max_atoms) {
  while (auto q = expand(max_atoms)) {
    if (binding_.size() >= kMaxStrata)
      throw Error("action " + occ_.action + ": more than " + std::to_string(kMaxStrata) +
                  " implicit variables; " + std::to_string(occ_.pairs.size()) +
                  " occurrences are too few to tell referring expressions apart");
    push_stratum(std::move(*q));
  }
}

namespace {

bool entailed_by_binding(const LiftedAtom& e, const StratifiedQuery& binding) {
  for (const auto& q : binding.strata)
    for (const auto& b : q.atoms) {
      if (b.predicate != e.predicate || b.polarity != e.polarity) continue;
      bool ok = true;
      for (std::size_t i = 0; i < e.args.size() && ok; ++i) {
        if (e.positive()) {
          ok = e.args[i].is_free() || e.args[i] == b.args[i];
        } else {
          ok = b.args[i].is_free() || b.args[i] == e.args[i];
        }
      }
      if (ok) return true;
    }
  return false;
}

}  // namespace

std::vector<LiftedAtom> ActionLearner::mine_extra_preconditions() const {
  const std::size_t nz = binding_.size();
  labels_cache_.assign(2, {});
  for (std::size_t i = 0; i < nx_; ++i) labels_cache_[0].push_back(var_labels(VariableRef::x(static_cast<int>(i + 1))));
  for (std::size_t j = 0; j < nz; ++j) labels_cache_[1].push_back(var_labels(VariableRef::z(static_cast<int>(j + 1))));
  std::vector<VariableRef> options;
  for (std::size_t i = 0; i < nx_; ++i) options.push_back(VariableRef::x(static_cast<int>(i + 1)));
  for (std::size_t j = 0; j < nz; ++j) options.push_back(VariableRef::z(static_cast<int>(j + 1)));
  options.push_back(VariableRef::free());
  std::vector<LiftedAtom> cands;
  const auto& preds = data_->predicates();
  for (std::size_t p = 0; p < preds.size(); ++p) {
    const std::size_t k = preds[p].arity();
    for_each_tuple(k, options, [&](const std::vector<VariableRef>& slots) {
      for (std::size_t pos = 0; pos < k; ++pos)
        if (!slot_compatible(static_cast<PredId>(p), pos, slots[pos])) return;
      // facts about the state as a whole say nothing about this action's
      // arguments and only overfit the trace
      if (k > 0 && std::all_of(slots.begin(), slots.end(), [](VariableRef v) { return v.is_free(); })) return;
      for (auto pol : {Polarity::Positive, Polarity::Negative}) {
        LiftedAtom a{static_cast<PredId>(p), slots, pol};
        if (entailed_by_binding(a, binding_)) continue;
        cands.push_back(std::move(a));
      }
    });
  }
  cands = canonical_atom_order(std::move(cands));
  std::vector<LiftedAtom> keep;
  std::vector<ObjectId> values(nx_ + nz, kNoObject);
  for (const auto& a : cands) {
    std::vector<LiftedAtom> one{a};
    CompiledQuery q(one, nx_, nz, {});
    bool all = true;
    for (std::size_t o = 0; o < occ_.pairs.size() && all; ++o) {
      const auto& occ = occ_.pairs[o];
      std::copy(occ.args.begin(), occ.args.end(), values.begin());
      std::copy(zvals_[o].begin(), zvals_[o].end(), values.begin() + static_cast<std::ptrdiff_t>(nx_));
      all = q.holds(data_->indexed(occ.trace).ctx(occ.step), values);
    }
    if (all) keep.push_back(a);
  }
  return keep;
}

void ActionLearner::mine_effects(std::vector<LiftedAtom>& add, std::vector<LiftedAtom>& del) const {
  const std::size_t n_occ = occ_.pairs.size();
  std::vector<std::vector<GroundAtom>> added(n_occ), deleted(n_occ);
  for (std::size_t o = 0; o < n_occ; ++o) {
    const auto& occ = occ_.pairs[o];
    const auto& it = data_->indexed(occ.trace);
    auto pre = it.state(occ.step).atoms();
    auto post = it.state(occ.step + 1).atoms();
    std::set_difference(post.begin(), post.end(), pre.begin(), pre.end(), std::back_inserter(added[o]));
    std::set_difference(pre.begin(), pre.end(), post.begin(), post.end(), std::back_inserter(deleted[o]));
  }
  auto describe = [&](std::size_t o) {
    const auto& occ = occ_.pairs[o];
    return "action " + occ_.action + " at trace " + std::to_string(occ.trace) + " step " + std::to_string(occ.step);
  };
  auto value_of = [&](std::size_t o, VariableRef v) {
    return v.is_explicit() ? occ_.pairs[o].args[v.index - 1] : zvals_[o][v.index - 1];
  };
  std::vector<VariableRef> vars;
  for (std::size_t i = 0; i < nx_; ++i) vars.push_back(VariableRef::x(static_cast<int>(i + 1)));
  for (std::size_t j = 0; j < binding_.size(); ++j) vars.push_back(VariableRef::z(static_cast<int>(j + 1)));
  auto ground = [&](const LiftedAtom& a, std::size_t o) {
    GroundAtom g;
    g.pred = a.predicate;
    for (std::size_t i = 0; i < a.args.size(); ++i) g.args[i] = value_of(o, a.args[i]);
    return g;
  };
  auto mine = [&](const std::vector<std::vector<GroundAtom>>& changes, const char* kind) {
    std::vector<LiftedAtom> lifted;
    for (const auto& g : changes[0]) {
      const std::size_t k = data_->predicates()[g.pred].arity();
      std::vector<std::vector<VariableRef>> choices(k);
      for (std::size_t pos = 0; pos < k; ++pos) {
        for (auto v : vars)
          if (value_of(0, v) == g.args[pos]) choices[pos].push_back(v);
        if (choices[pos].empty())
          throw Error("uncoverable " + std::string(kind) + " change " +
                      render_ground(g, data_->predicates(), data_->traces()[occ_.pairs[0].trace].objects) + " in " +
                      describe(0));
      }
      std::vector<VariableRef> cur(k);
      auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == k) {
          lifted.push_back({g.pred, cur, Polarity::Positive});
          return;
        }
        for (auto v : choices[pos]) {
          cur[pos] = v;
          self(self, pos + 1);
        }
      };
      rec(rec, 0);
    }
    lifted = canonical_atom_order(std::move(lifted));
    std::vector<LiftedAtom> kept;
    for (const auto& a : lifted) {
      bool ok = true;
      for (std::size_t o = 0; o < n_occ && ok; ++o)
        ok = std::binary_search(changes[o].begin(), changes[o].end(), ground(a, o));
      if (ok) kept.push_back(a);
    }
    for (std::size_t o = 0; o < n_occ; ++o) {
      std::vector<GroundAtom> g;
      for (const auto& a : kept) g.push_back(ground(a, o));
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      if (g != changes[o]) throw Error("uncoverable " + std::string(kind) + " changes in " + describe(o));
    }
    return kept;
  };
  add = mine(added, "add");
  del = mine(deleted, "delete");
}

std::vector<TypeSet> ActionLearner::param_types() const {
  std::vector<TypeSet> out;
  for (std::size_t i = 0; i < nx_; ++i) out.push_back(var_labels(VariableRef::x(static_cast<int>(i + 1))));
  return out;
}

ActionSchema ActionLearner::learn(std::size_t max_atoms) {
  synthesize(max_atoms);
  ActionSchema s;
  s.name = occ_.action;
  auto types = param_types();
  for (std::size_t i = 0; i < nx_; ++i) s.params.push_back({"?x" + std::to_string(i + 1), types[i]});
  s.binding = binding_;
  s.pre = mine_extra_preconditions();
  mine_effects(s.add, s.del);
  return s;
}

LearnResult learn_domain(std::span<const Trace> traces, const LearnOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  LearningData data(traces);
  auto names = observed_actions(traces);
  LearnResult res;
  res.domain.name = traces.front().domain_name;
  res.domain.flavor = Flavor::StripsPlus;
  for (const auto& l : data.all_labels())
    if (l != "object") res.domain.types.push_back({l, ""});
  res.domain.predicates = data.predicates();
  std::vector<ActionSchema> schemas(names.size());
  res.actions.resize(names.size());
  std::vector<std::string> errors(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= names.size()) return;
      auto a0 = std::chrono::steady_clock::now();
      try {
        ActionLearner learner(data, collect_occurrences(traces, names[i]));
        schemas[i] = learner.learn(options.max_atoms);
        res.actions[i].occurrences = learner.occurrences().pairs.size();
        res.actions[i].pruned_constants = learner.pruned_constants();
      } catch (const std::exception& e) {
        errors[i] = names[i] + ": " + e.what();
      }
      res.actions[i].action = names[i];
      res.actions[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - a0).count();
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, names.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::string msg;
  for (const auto& e : errors)
    if (!e.empty()) msg += (msg.empty() ? "" : "; ") + e;
  if (!msg.empty()) throw Error("learning failed: " + msg);
  res.domain.schemas = std::move(schemas);
  validate_domain(res.domain);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string render_learn_report(const LearnResult& r, bool timing) {
  std::ostringstream out;
  const auto& preds = r.domain.predicates;
  for (std::size_t i = 0; i < r.domain.schemas.size(); ++i) {
    const auto& s = r.domain.schemas[i];
    const auto& a = r.actions[i];
    out << "action " << s.name << "/" << s.arity() << " occurrences=" << a.occurrences
        << " strata=" << s.binding.size() << "\n";
    for (const auto& q : s.binding.strata) {
      out << "  z" << q.introduces << " :";
      for (const auto& atom : q.atoms) out << " " << render_pattern(atom, preds);
      out << "\n";
    }
    out << "  pre :";
    for (const auto& atom : s.pre) out << " " << render_pattern(atom, preds);
    out << "\n  add :";
    for (const auto& atom : s.add) out << " " << render_pattern(atom, preds);
    out << "\n  del :";
    for (const auto& atom : s.del) out << " " << render_pattern(atom, preds);
    out << "\n";
    for (const auto& c : a.pruned_constants) {
      out << "  pruned instance-constant :";
      for (const auto& atom : c) out << " " << render_pattern(atom, preds);
      out << "\n";
    }
    if (timing) out << "  seconds " << a.seconds << "\n";
  }
  if (timing) out << "total seconds " << r.seconds << "\n";
  return out.str();
}

}  // namespace stripsplus
