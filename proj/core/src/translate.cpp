#include "stripsplus/translate.hpp"

#include <algorithm>
#include <sstream>

namespace stripsplus {

TranslationData::TranslationData(const Domain& strips, std::span<const Trace> traces) : traces_(traces) {
  for (const auto& t : traces)
    indexed_.push_back(std::make_unique<IndexedTrace>(
        t, strips.predicates, build_position_domains(strips.predicates, strips.types, t.objects)));
}

namespace {

struct Ordering {
  std::vector<std::size_t> order;               // demoted params in stratum order
  std::vector<std::vector<std::size_t>> atoms;  // pre atom indexes per stratum
};

bool unique_everywhere(const ActionSchema& schema, const std::vector<std::size_t>& atom_ids, std::size_t target,
                       const std::vector<bool>& known, const OccurrenceSet& occ, const TranslationData& data) {
  std::vector<LiftedAtom> atoms;
  for (auto i : atom_ids) atoms.push_back(schema.pre[i]);
  VariableRef t = VariableRef::x(static_cast<int>(target + 1));
  CompiledQuery q(atoms, schema.params.size(), 0, std::span<const VariableRef>(&t, 1));
  std::vector<ObjectId> values(schema.params.size(), kNoObject);
  for (const auto& o : occ.pairs) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = known[i] ? o.args[i] : kNoObject;
    if (q.solve(data.indexed(o.trace).ctx(o.step), values, 2, nullptr) != 1) return false;
  }
  return true;
}

std::optional<Ordering> order_demotions(const ActionSchema& schema, const std::vector<bool>& demoted,
                                        const OccurrenceSet& occ, const TranslationData& data) {
  const std::size_t n = schema.params.size();
  std::vector<bool> known(n);
  for (std::size_t i = 0; i < n; ++i) known[i] = !demoted[i];
  std::vector<bool> used(schema.pre.size(), false);
  Ordering out;
  std::size_t todo = static_cast<std::size_t>(std::count(demoted.begin(), demoted.end(), true));
  while (out.order.size() < todo) {
    bool progressed = false;
    for (std::size_t d = 0; d < n; ++d) {
      if (!demoted[d] || known[d]) continue;
      std::vector<std::size_t> ids;
      for (std::size_t a = 0; a < schema.pre.size(); ++a) {
        if (used[a]) continue;
        const auto& atom = schema.pre[a];
        if (!atom.mentions(VariableRef::x(static_cast<int>(d + 1)))) continue;
        bool ok = true;
        for (auto v : atom.args)
          if (v.is_explicit() && v.index - 1u != d && !known[v.index - 1]) ok = false;
        if (ok) ids.push_back(a);
      }
      if (ids.empty() || !unique_everywhere(schema, ids, d, known, occ, data)) continue;
      for (auto a : ids) used[a] = true;
      known[d] = true;
      out.order.push_back(d);
      out.atoms.push_back(std::move(ids));
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt;
  }
  return out;
}

}  // namespace

SchemaTranslation detect_determined_args(const ActionSchema& schema, const OccurrenceSet& occ,
                                         const TranslationData& data) {
  SchemaTranslation tr;
  tr.action = schema.name;
  tr.occurrences = occ.pairs.size();
  const std::size_t n = schema.params.size();
  if (occ.empty()) {
    tr.observed = false;
    for (std::size_t i = 0; i < n; ++i) tr.kept.push_back(i);
    return tr;
  }
  std::vector<bool> demoted(n, false);
  std::optional<Ordering> best = Ordering{};
  for (std::size_t k = n; k-- > 0;) {
    demoted[k] = true;
    if (auto ord = order_demotions(schema, demoted, occ, data)) {
      best = std::move(ord);
    } else {
      demoted[k] = false;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!demoted[i]) tr.kept.push_back(i);
  // Renaming: kept -> x1.., demoted -> z1.. in stratum order.
  std::vector<VariableRef> rename(n);
  for (std::size_t k = 0; k < tr.kept.size(); ++k) rename[tr.kept[k]] = VariableRef::x(static_cast<int>(k + 1));
  for (std::size_t m = 0; m < best->order.size(); ++m) rename[best->order[m]] = VariableRef::z(static_cast<int>(m + 1));
  for (std::size_t m = 0; m < best->order.size(); ++m) {
    Demotion d;
    d.param = best->order[m];
    d.stratum.introduces = static_cast<int>(m + 1);
    for (auto a : best->atoms[m]) {
      LiftedAtom atom = schema.pre[a];
      for (auto& v : atom.args) v = rename[v.index - 1];
      d.stratum.atoms.push_back(std::move(atom));
    }
    tr.moved.push_back(std::move(d));
  }
  return tr;
}

ActionSchema apply_translation(const ActionSchema& schema, const SchemaTranslation& tr) {
  const std::size_t n = schema.params.size();
  std::vector<VariableRef> rename(n);
  for (std::size_t k = 0; k < tr.kept.size(); ++k) rename[tr.kept[k]] = VariableRef::x(static_cast<int>(k + 1));
  for (std::size_t m = 0; m < tr.moved.size(); ++m) rename[tr.moved[m].param] = VariableRef::z(static_cast<int>(m + 1));
  auto ren = [&](LiftedAtom a) {
    for (auto& v : a.args) v = rename[v.index - 1];
    return a;
  };
  ActionSchema out;
  out.name = schema.name;
  for (auto k : tr.kept) out.params.push_back(schema.params[k]);
  for (const auto& d : tr.moved) out.binding.strata.push_back(d.stratum);
  for (const auto& a : schema.pre) {
    auto r = ren(a);
    bool in_binding = false;
    for (const auto& q : out.binding.strata)
      if (std::find(q.atoms.begin(), q.atoms.end(), r) != q.atoms.end()) in_binding = true;
    if (!in_binding) out.pre.push_back(std::move(r));
  }
  for (const auto& a : schema.add) out.add.push_back(ren(a));
  for (const auto& a : schema.del) out.del.push_back(ren(a));
  return out;
}

TranslationResult translate_domain(const Domain& strips, std::span<const Trace> traces) {
  for (const auto& s : strips.schemas)
    if (!s.is_strips()) throw Error("translate expects a positive STRIPS domain; " + s.name + " is not");
  TranslationData data(strips, traces);
  TranslationResult res;
  res.domain = strips;
  res.domain.flavor = Flavor::StripsPlus;
  res.domain.schemas.clear();
  for (const auto& s : strips.schemas) {
    auto occ = collect_occurrences(traces, s.name);
    auto tr = detect_determined_args(s, occ, data);
    if (!tr.observed) res.warnings.push_back("action " + s.name + " never observed; passed through unchanged");
    res.domain.schemas.push_back(apply_translation(s, tr));
    res.report.push_back(std::move(tr));
  }
  validate_domain(res.domain);
  return res;
}

std::string render_translation_report(const Domain& strips, const TranslationResult& result) {
  std::ostringstream out;
  for (std::size_t i = 0; i < result.report.size(); ++i) {
    const auto& tr = result.report[i];
    const auto* orig = strips.find_schema(tr.action);
    out << "action " << tr.action << " occurrences=" << tr.occurrences << (tr.observed ? "" : " unobserved") << "\n";
    out << "  kept:";
    for (auto k : tr.kept) out << " " << orig->params[k].name;
    out << "\n";
    for (const auto& d : tr.moved) {
      out << "  " << orig->params[d.param].name << " -> z" << d.stratum.introduces << " :";
      for (const auto& a : d.stratum.atoms) out << " " << render_pattern(a, strips.predicates);
      out << "\n";
    }
  }
  for (const auto& w : result.warnings) out << "warning: " << w << "\n";
  return out.str();
}

Trace project_trace(const Trace& trace, const TranslationResult& result) {
  Trace out = trace;
  for (auto& st : out.steps) {
    auto it = std::find_if(result.report.begin(), result.report.end(),
                           [&](const SchemaTranslation& t) { return t.action == st.action.name; });
    if (it == result.report.end()) throw Error("trace action " + st.action.name + " not in the translated domain");
    std::vector<ObjectId> args;
    for (auto k : it->kept) args.push_back(st.action.args.at(k));
    st.action.args = std::move(args);
  }
  return out;
}

}  // namespace stripsplus
