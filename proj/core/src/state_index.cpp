#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "stripsplus/engine.hpp"

namespace stripsplus {

StateIndex::StateIndex(const State& state, std::size_t num_predicates) : state_(&state) {
  auto atoms = state.atoms();
  pred_begin_.assign(num_predicates + 1, 0);
  for (const auto& a : atoms) {
    if (a.pred >= num_predicates) throw Error("state atom outside the predicate table");
    ++pred_begin_[a.pred + 1];
  }
  std::partial_sum(pred_begin_.begin(), pred_begin_.end(), pred_begin_.begin());

  range_.assign(num_predicates * kMaxArity + 1, 0);
  flat_obj_.reserve(atoms.size() * 2);
  flat_idx_.reserve(atoms.size() * 2);
  std::vector<std::pair<ObjectId, std::uint32_t>> tmp;
  for (std::size_t p = 0; p < num_predicates; ++p) {
    for (std::size_t pos = 0; pos < kMaxArity; ++pos) {
      range_[p * kMaxArity + pos] = static_cast<std::uint32_t>(flat_obj_.size());
      tmp.clear();
      for (auto i = pred_begin_[p]; i < pred_begin_[p + 1]; ++i)
        if (atoms[i].args[pos] != kNoObject) tmp.emplace_back(atoms[i].args[pos], i);
      if (pos > 0) std::stable_sort(tmp.begin(), tmp.end(), [](auto& a, auto& b) { return a.first < b.first; });
      for (auto [o, i] : tmp) {
        flat_obj_.push_back(o);
        flat_idx_.push_back(i);
      }
    }
  }
  range_.back() = static_cast<std::uint32_t>(flat_obj_.size());
}

std::span<const GroundAtom> StateIndex::atoms_of(PredId p) const {
  auto atoms = state_->atoms();
  return atoms.subspan(pred_begin_[p], pred_begin_[p + 1] - pred_begin_[p]);
}

std::span<const std::uint32_t> StateIndex::with(PredId p, std::size_t pos, ObjectId o) const {
  std::size_t slot = static_cast<std::size_t>(p) * kMaxArity + pos;
  auto b = flat_obj_.begin() + range_[slot];
  auto e = flat_obj_.begin() + range_[slot + 1];
  auto [lo, hi] = std::equal_range(b, e, o);
  auto off = static_cast<std::size_t>(lo - flat_obj_.begin());
  return std::span<const std::uint32_t>(flat_idx_).subspan(off, static_cast<std::size_t>(hi - lo));
}

PositionDomains::PositionDomains(std::vector<std::vector<std::vector<ObjectId>>> per_position,
                                 std::size_t num_objects)
    : objects_(std::move(per_position)), num_objects_(num_objects) {
  member_.assign(objects_.size() * kMaxArity * num_objects_, false);
  for (std::size_t p = 0; p < objects_.size(); ++p) {
    if (objects_[p].size() > kMaxArity) throw Error("position domain arity too large");
    for (std::size_t pos = 0; pos < objects_[p].size(); ++pos) {
      auto& v = objects_[p][pos];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (auto o : v) {
        if (o >= num_objects_) throw Error("position domain object out of range");
        member_[(p * kMaxArity + pos) * num_objects_ + o] = true;
      }
    }
  }
}

bool type_matches(std::span<const TypeDecl> hierarchy, const std::string& type, const TypeSet& allowed) {
  if (allowed.empty()) return true;
  for (const auto& a : allowed) {
    if (a == "object") return true;
    std::string cur = type;
    for (std::size_t guard = 0; guard <= hierarchy.size() + 1 && !cur.empty(); ++guard) {
      if (cur == a) return true;
      auto it = std::find_if(hierarchy.begin(), hierarchy.end(), [&](const TypeDecl& t) { return t.name == cur; });
      if (it == hierarchy.end()) break;
      cur = it->parent;
    }
  }
  return false;
}

PositionDomains build_position_domains(std::span<const PredicateSig> preds, std::span<const TypeDecl> hierarchy,
                                       const ObjectTable& objects) {
  std::vector<std::vector<std::vector<ObjectId>>> per(preds.size());
  std::map<std::pair<std::string, TypeSet>, bool> memo;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    per[p].resize(preds[p].arity());
    for (std::size_t pos = 0; pos < preds[p].arity(); ++pos)
      for (std::size_t o = 0; o < objects.size(); ++o) {
        auto key = std::make_pair(objects.types[o], preds[p].position_types[pos]);
        auto it = memo.find(key);
        if (it == memo.end())
          it = memo.emplace(key, type_matches(hierarchy, objects.types[o], preds[p].position_types[pos])).first;
        if (it->second) per[p][pos].push_back(static_cast<ObjectId>(o));
      }
  }
  return PositionDomains(std::move(per), objects.size());
}

TypeInfo infer_position_domains(std::span<const Trace> traces) {
  TypeInfo info;
  if (traces.empty()) return info;
  const auto& preds = traces.front().predicates;
  info.observed.resize(preds.size());
  std::vector<std::vector<std::set<std::string>>> labels(preds.size());
  for (std::size_t p = 0; p < preds.size(); ++p) {
    info.observed[p].resize(preds[p].arity());
    labels[p].resize(preds[p].arity());
  }
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const auto& tr = traces[t];
    if (tr.predicates.size() != preds.size()) throw Error("traces do not share a predicate table");
    std::vector<std::vector<std::vector<bool>>> seen(preds.size());
    for (std::size_t p = 0; p < preds.size(); ++p)
      seen[p].assign(preds[p].arity(), std::vector<bool>(tr.objects.size(), false));
    auto scan = [&](const State& s) {
      for (const auto& a : s.atoms())
        for (std::size_t pos = 0; pos < preds[a.pred].arity(); ++pos) seen[a.pred][pos][a.args[pos]] = true;
    };
    scan(tr.init);
    for (const auto& st : tr.steps) scan(st.state);
    for (std::size_t p = 0; p < preds.size(); ++p)
      for (std::size_t pos = 0; pos < preds[p].arity(); ++pos)
        for (std::size_t o = 0; o < tr.objects.size(); ++o) {
          if (!seen[p][pos][o]) continue;
          labels[p][pos].insert(tr.objects.types[o]);
          if (t == 0) info.observed[p][pos].push_back(static_cast<ObjectId>(o));
        }
  }
  info.labels.resize(preds.size());
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (auto& l : labels[p]) info.labels[p].emplace_back(l.begin(), l.end());
  return info;
}

IndexedTrace::IndexedTrace(const Trace& trace, std::span<const PredicateSig> preds, PositionDomains domains)
    : trace_(&trace), domains_(std::move(domains)) {
  PredicateMap map(trace.predicates, preds);
  states_.reserve(trace.steps.size() + 1);
  states_.push_back(map.apply(trace.init));
  for (const auto& st : trace.steps) states_.push_back(map.apply(st.state));
  indexes_.reserve(states_.size());
  for (const auto& s : states_) indexes_.emplace_back(s, preds.size());
}

}  // namespace stripsplus
