#include "stripsplus/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace stripsplus {

bool LiftedAtom::mentions(VariableRef v) const {
  return std::find(args.begin(), args.end(), v) != args.end();
}

std::size_t LiftedAtom::free_count() const {
  return static_cast<std::size_t>(std::count_if(args.begin(), args.end(), [](VariableRef v) { return v.is_free(); }));
}

int LiftedAtom::max_implicit() const {
  int m = 0;
  for (auto v : args)
    if (v.is_implicit()) m = std::max(m, static_cast<int>(v.index));
  return m;
}

int LiftedAtom::max_explicit() const {
  int m = 0;
  for (auto v : args)
    if (v.is_explicit()) m = std::max(m, static_cast<int>(v.index));
  return m;
}

std::strong_ordering compare_atoms(const LiftedAtom& a, const LiftedAtom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  if (auto c = a.polarity <=> b.polarity; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

std::vector<LiftedAtom> canonical_atom_order(std::vector<LiftedAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(), AtomLess{});
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

bool ActionSchema::is_strips() const {
  if (!binding.empty()) return false;
  auto plain = [](const std::vector<LiftedAtom>& v) {
    return std::all_of(v.begin(), v.end(), [](const LiftedAtom& a) {
      return a.positive() && std::all_of(a.args.begin(), a.args.end(), [](VariableRef r) { return r.is_explicit(); });
    });
  };
  return plain(pre) && plain(add) && plain(del);
}

std::optional<PredId> Domain::find_predicate(std::string_view name) const {
  auto it = std::lower_bound(predicates.begin(), predicates.end(), name,
                             [](const PredicateSig& p, std::string_view n) { return p.name < n; });
  if (it == predicates.end() || it->name != name) return std::nullopt;
  return static_cast<PredId>(it - predicates.begin());
}

const ActionSchema* Domain::find_schema(std::string_view name) const {
  for (const auto& s : schemas)
    if (s.name == name) return &s;
  return nullptr;
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string cur(type);
  for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
    if (cur == ancestor) return true;
    auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == cur; });
    if (it == types.end() || it->parent.empty()) return false;
    cur = it->parent;
  }
  return false;
}

namespace {

void check_atom(const Domain& d, const ActionSchema& s, const LiftedAtom& a, bool effect, const std::string& where) {
  if (a.predicate >= d.predicates.size())
    throw Error("action " + s.name + ": " + where + " references an undeclared predicate");
  const auto& sig = d.predicates[a.predicate];
  if (a.args.size() != sig.arity())
    throw Error("action " + s.name + ": arity mismatch for " + sig.name + " in " + where);
  for (auto v : a.args) {
    if (v.is_explicit() && (v.index < 1 || v.index > s.params.size()))
      throw Error("action " + s.name + ": explicit slot out of range in " + where);
    if (v.is_implicit() && (v.index < 1 || v.index > s.binding.size()))
      throw Error("action " + s.name + ": implicit slot not introduced by the binding query in " + where);
    if (effect && v.is_free()) throw Error("action " + s.name + ": effect atom with a free slot");
  }
  if (effect && !a.positive()) throw Error("action " + s.name + ": negative effect atom");
}

}  // namespace

void validate_domain(const Domain& d) {
  for (std::size_t i = 1; i < d.predicates.size(); ++i)
    if (!(d.predicates[i - 1].name < d.predicates[i].name))
      throw Error("predicate table not sorted or has duplicate " + d.predicates[i].name);
  std::set<std::string> names;
  for (const auto& s : d.schemas) {
    if (!names.insert(s.name).second) throw Error("duplicate action " + s.name);
    for (std::size_t k = 0; k < s.binding.strata.size(); ++k) {
      const auto& q = s.binding.strata[k];
      if (q.introduces != static_cast<int>(k + 1))
        throw Error("action " + s.name + ": stratum " + std::to_string(k + 1) + " has wrong index");
      if (q.atoms.empty()) throw Error("action " + s.name + ": empty stratum");
      bool mentions = false;
      for (const auto& a : q.atoms) {
        check_atom(d, s, a, false, "binding");
        if (a.max_implicit() > q.introduces)
          throw Error("action " + s.name + ": stratum mentions a later implicit variable");
        if (a.mentions(VariableRef::z(q.introduces))) mentions = true;
      }
      if (!mentions) throw Error("action " + s.name + ": stratum does not mention its variable");
    }
    for (const auto& a : s.pre) check_atom(d, s, a, false, "precondition");
    for (const auto& a : s.add) check_atom(d, s, a, true, "add effect");
    for (const auto& a : s.del) check_atom(d, s, a, true, "delete effect");
  }
}

void canonicalize_domain(Domain& d) {
  std::vector<std::size_t> order(d.predicates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d.predicates[a].name < d.predicates[b].name; });
  std::vector<PredId> remap(order.size());
  std::vector<PredicateSig> sorted;
  sorted.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<PredId>(i);
    sorted.push_back(d.predicates[order[i]]);
  }
  d.predicates = std::move(sorted);
  auto fix = [&](std::vector<LiftedAtom>& v) {
    for (auto& a : v) a.predicate = remap[a.predicate];
  };
  for (auto& s : d.schemas) {
    for (auto& q : s.binding.strata) fix(q.atoms);
    fix(s.pre);
    fix(s.add);
    fix(s.del);
  }
  std::sort(d.schemas.begin(), d.schemas.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
}

std::optional<ObjectId> ObjectTable::find(std::string_view name) const {
  if (index_.size() != names.size()) {
    auto& idx = const_cast<std::unordered_map<std::string, ObjectId>&>(index_);
    idx.clear();
    for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], static_cast<ObjectId>(i));
  }
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ObjectId ObjectTable::add(std::string name, std::string type) {
  if (auto id = find(name)) {
    if (types[*id] != type) throw Error("object " + name + " declared with two types");
    return *id;
  }
  if (names.size() >= kMaxObjects) throw Error("too many objects");
  auto id = static_cast<ObjectId>(names.size());
  index_.emplace(name, id);
  names.push_back(std::move(name));
  types.push_back(std::move(type));
  return id;
}

State::State(std::vector<GroundAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  keys_.reserve(atoms_.size() * 2);
  for (const auto& a : atoms_) keys_.insert(a.key());
}

ObjectId Assignment::get(VariableRef v) const {
  const auto& vec = v.is_explicit() ? explicit_args : implicit_args;
  if (v.is_free() || v.index == 0 || v.index > vec.size()) return kNoObject;
  return vec[v.index - 1];
}

void Assignment::set(VariableRef v, ObjectId o) {
  if (v.is_free() || v.index == 0) return;
  auto& vec = v.is_explicit() ? explicit_args : implicit_args;
  if (vec.size() < v.index) vec.resize(v.index, kNoObject);
  vec[v.index - 1] = o;
}

std::string render_slot(VariableRef v) {
  switch (v.kind) {
    case VarKind::Explicit:
      return std::to_string(v.index);
    case VarKind::Implicit:
      return std::to_string(v.index) + "z";
    case VarKind::Free:
      break;
  }
  return "_";
}

VariableRef parse_slot(std::string_view t) {
  if (t == "_") return VariableRef::free();
  bool implicit = !t.empty() && t.back() == 'z';
  if (implicit) t.remove_suffix(1);
  if (t.empty() || t.size() > 3 || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error("bad slot '" + std::string(t) + "'");
  int i = std::stoi(std::string(t));
  if (i < 1 || i > 255) throw Error("slot index out of range");
  return implicit ? VariableRef::z(i) : VariableRef::x(i);
}

std::string render_pattern(const LiftedAtom& a, std::span<const PredicateSig> preds) {
  std::string out = a.positive() ? "" : "!";
  out += preds[a.predicate].name;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += render_slot(a.args[i]);
  }
  out += ')';
  return out;
}

LiftedAtom parse_pattern(std::string_view t, std::span<const PredicateSig> preds) {
  LiftedAtom a;
  if (!t.empty() && t.front() == '!') {
    a.polarity = Polarity::Negative;
    t.remove_prefix(1);
  }
  auto lp = t.find('(');
  if (lp == std::string_view::npos || t.back() != ')') throw Error("bad pattern '" + std::string(t) + "'");
  std::string name = to_lower(t.substr(0, lp));
  auto it = std::find_if(preds.begin(), preds.end(), [&](const PredicateSig& p) { return p.name == name; });
  if (it == preds.end()) throw Error("unknown predicate in pattern: " + name);
  a.predicate = static_cast<PredId>(it - preds.begin());
  auto body = t.substr(lp + 1, t.size() - lp - 2);
  while (!body.empty()) {
    auto comma = body.find(',');
    a.args.push_back(parse_slot(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (a.args.size() != it->arity()) throw Error("arity mismatch in pattern for " + name);
  return a;
}

std::string render_ground(const GroundAtom& a, std::span<const PredicateSig> preds, const ObjectTable& objects) {
  std::string out = "(" + preds[a.pred].name;
  for (std::size_t i = 0; i < preds[a.pred].arity(); ++i) {
    out += ' ';
    out += objects.names[a.args[i]];
  }
  out += ')';
  return out;
}

std::vector<std::string> sorted_atom_strings(const State& s, std::span<const PredicateSig> preds,
                                             const ObjectTable& objects) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (const auto& a : s.atoms()) out.push_back(render_ground(a, preds, objects));
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

PredicateMap::PredicateMap(std::span<const PredicateSig> from, std::span<const PredicateSig> to)
    : table_(from.size(), kUnmapped) {
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = 0; j < to.size(); ++j)
      if (from[i].name == to[j].name && from[i].arity() == to[j].arity()) table_[i] = static_cast<PredId>(j);
}

State PredicateMap::apply(const State& s) const {
  std::vector<GroundAtom> out;
  out.reserve(s.size());
  for (auto a : s.atoms()) {
    if (a.pred >= table_.size() || table_[a.pred] == kUnmapped) continue;
    a.pred = table_[a.pred];
    out.push_back(a);
  }
  return State(std::move(out));
}

}  // namespace stripsplus

namespace stripsplus {

OccurrenceSet collect_occurrences(std::span<const Trace> traces, std::string_view action) {
  OccurrenceSet occ;
  occ.action = std::string(action);
  for (std::size_t t = 0; t < traces.size(); ++t)
    for (std::size_t k = 0; k < traces[t].steps.size(); ++k) {
      const auto& a = traces[t].steps[k].action;
      if (a.name != action) continue;
      if (!occ.pairs.empty() && occ.pairs.front().args.size() != a.args.size())
        throw Error("action " + a.name + " fired with two different arities");
      occ.pairs.push_back({t, k, a.args});
    }
  return occ;
}

std::vector<std::string> observed_actions(std::span<const Trace> traces) {
  std::set<std::string> names;
  for (const auto& t : traces)
    for (const auto& st : t.steps) names.insert(st.action.name);
  return {names.begin(), names.end()};
}

}  // namespace stripsplus
