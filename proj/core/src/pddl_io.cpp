#include "stripsplus/pddl_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stripsplus {

namespace {

struct TypedName {
  std::string name;
  TypeSet type;
  const SExpr* where = nullptr;
};

TypeSet read_type(const SExpr& e) {
  if (!e.is_list) return {e.atom};
  if (!e.head_is("either") || e.items.size() < 2) throw e.error("malformed type expression");
  TypeSet out;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    if (e.items[i].is_list) throw e.items[i].error("nested type expression");
    out.push_back(e.items[i].atom);
  }
  return out;
}

// `a b - t c - (either u v) d` starting at items[first].
std::vector<TypedName> read_typed_list(const SExpr& list, std::size_t first) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = first; i < list.items.size(); ++i) {
    const auto& it = list.items[i];
    if (it.is_atom("-")) {
      if (i + 1 >= list.items.size()) throw it.error("missing type after '-'");
      if (pending == 0) throw it.error("type without names");
      TypeSet t = read_type(list.items[++i]);
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = t;
      pending = 0;
      continue;
    }
    if (it.is_list) throw it.error("expected a name");
    out.push_back({it.atom, {"object"}, &it});
    ++pending;
  }
  return out;
}

struct DomainReader {
  bool plus = false;
  Domain d;
  std::map<std::string, PredId> pred_index;  // declaration order ids, remapped at the end

  void check_types_known(const TypeSet& t, const SExpr& where) const {
    for (const auto& name : t) {
      if (name == "object") continue;
      bool found = std::any_of(d.types.begin(), d.types.end(), [&](const TypeDecl& td) { return td.name == name; });
      if (!found) throw where.error("undeclared type " + name);
    }
  }

  void read_requirements(const SExpr& sec) {
    static const std::set<std::string> ok{":strips", ":typing", ":negative-preconditions"};
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const auto& r = sec.items[i];
      if (r.is_list) throw r.error("malformed requirement");
      if (ok.contains(r.atom)) continue;
      if (plus && r.atom == ":implicit-arguments") continue;
      throw UnsupportedFeature("unsupported requirement " + r.atom, r.line, r.col);
    }
  }

  void read_types(const SExpr& sec) {
    for (auto& tn : read_typed_list(sec, 1)) {
      if (tn.type.size() != 1) throw tn.where->error("either is not allowed as a parent type");
      if (tn.name == "object") continue;
      std::string parent = tn.type.front() == "object" ? "" : tn.type.front();
      auto it = std::find_if(d.types.begin(), d.types.end(), [&](const TypeDecl& t) { return t.name == tn.name; });
      if (it != d.types.end()) {
        if (!parent.empty()) it->parent = parent;
      } else {
        d.types.push_back({tn.name, parent});
      }
    }
    // a parent named only after a dash is a type of its own
    for (std::size_t i = 0; i < d.types.size(); ++i) {
      const std::string parent = d.types[i].parent;
      if (parent.empty()) continue;
      if (std::none_of(d.types.begin(), d.types.end(), [&](const TypeDecl& t) { return t.name == parent; }))
        d.types.push_back({parent, ""});
    }
  }

  void read_predicates(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const auto& p = sec.items[i];
      if (!p.is_list || p.items.empty() || p.items[0].is_list) throw p.error("malformed predicate declaration");
      PredicateSig sig;
      sig.name = p.items[0].atom;
      for (auto& tn : read_typed_list(p, 1)) {
        if (tn.name.empty() || tn.name[0] != '?') throw tn.where->error("predicate argument must be a variable");
        check_types_known(tn.type, *tn.where);
        sig.position_types.push_back(tn.type);
      }
      if (sig.arity() > kMaxArity) throw p.error("predicate arity above " + std::to_string(kMaxArity));
      if (pred_index.contains(sig.name)) throw p.error("duplicate predicate " + sig.name);
      pred_index.emplace(sig.name, static_cast<PredId>(d.predicates.size()));
      d.predicates.push_back(std::move(sig));
    }
  }

  VariableRef read_slot(const SExpr& e, const ActionSchema& s) const {
    if (e.is_list) throw e.error("expected a variable");
    const std::string& t = e.atom;
    if (!t.empty() && t[0] == '?') {
      for (std::size_t i = 0; i < s.params.size(); ++i)
        if (s.params[i].name == t) return VariableRef::x(static_cast<int>(i + 1));
      throw e.error("unknown parameter " + t);
    }
    if (!plus) {
      if (std::isdigit(static_cast<unsigned char>(t.empty() ? 'a' : t[0])) || t == "_")
        throw e.error("slot references need the :implicit-arguments dialect");
      throw UnsupportedFeature("constants in action bodies are not supported (" + t + ")", e.line, e.col);
    }
    try {
      return parse_slot(t);
    } catch (const Error& err) {
      throw e.error(err.what());
    }
  }

  LiftedAtom read_atom(const SExpr& e, const ActionSchema& s, bool allow_neg) const {
    LiftedAtom a;
    const SExpr* body = &e;
    if (e.head_is("not")) {
      if (!allow_neg) {
        throw UnsupportedFeature("negative preconditions in STRIPS input are not supported", e.line, e.col);
      }
      if (e.items.size() != 2) throw e.error("malformed negation");
      a.polarity = Polarity::Negative;
      body = &e.items[1];
    }
    if (!body->is_list || body->items.empty() || body->items[0].is_list) throw body->error("malformed atom");
    const std::string& name = body->items[0].atom;
    static const std::set<std::string> unsupported{"or", "forall", "exists", "imply", "when", "=", "increase"};
    if (unsupported.contains(name)) throw UnsupportedFeature("unsupported construct " + name, body->line, body->col);
    auto it = pred_index.find(name);
    if (it == pred_index.end()) throw body->error("undeclared predicate " + name);
    a.predicate = it->second;
    for (std::size_t i = 1; i < body->items.size(); ++i) a.args.push_back(read_slot(body->items[i], s));
    if (a.args.size() != d.predicates[a.predicate].arity())
      throw body->error("arity mismatch for " + name + ": expected " +
                        std::to_string(d.predicates[a.predicate].arity()) + ", got " + std::to_string(a.args.size()));
    return a;
  }

  std::vector<const SExpr*> conjuncts(const SExpr& e) const {
    std::vector<const SExpr*> out;
    if (!e.is_list) throw e.error("expected a formula");
    if (e.items.empty()) return out;
    if (e.head_is("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(&e.items[i]);
      return out;
    }
    out.push_back(&e);
    return out;
  }

  void read_action(const SExpr& sec) {
    if (sec.items.size() < 2 || sec.items[1].is_list) throw sec.error("action without a name");
    ActionSchema s;
    s.name = sec.items[1].atom;
    for (std::size_t i = 2; i < sec.items.size(); ++i) {
      const auto& key = sec.items[i];
      if (key.is_list) throw key.error("expected an action keyword");
      if (i + 1 >= sec.items.size()) throw key.error("missing value for " + key.atom);
      const auto& val = sec.items[++i];
      if (key.atom == ":parameters") {
        if (!val.is_list) throw val.error("parameters must be a list");
        for (auto& tn : read_typed_list(val, 0)) {
          if (tn.name.empty() || tn.name[0] != '?') throw tn.where->error("parameter must be a variable");
          check_types_known(tn.type, *tn.where);
          s.params.push_back({tn.name, tn.type});
        }
      } else if (key.atom == ":implicit") {
        if (!plus) throw UnsupportedFeature(":implicit needs the :implicit-arguments requirement", key.line, key.col);
        if (!val.is_list || val.items.size() < 2 || val.items[0].is_list) throw val.error("malformed :implicit block");
        Subquery q;
        q.introduces = static_cast<int>(s.binding.strata.size() + 1);
        if (val.items[0].atom != "z" + std::to_string(q.introduces))
          throw val.error("expected stratum z" + std::to_string(q.introduces));
        for (std::size_t k = 1; k < val.items.size(); ++k) q.atoms.push_back(read_atom(val.items[k], s, true));
        s.binding.strata.push_back(std::move(q));
      } else if (key.atom == ":precondition") {
        for (const auto* c : conjuncts(val)) s.pre.push_back(read_atom(*c, s, plus));
      } else if (key.atom == ":effect") {
        for (const auto* c : conjuncts(val)) {
          auto a = read_atom(*c, s, true);
          bool neg = !a.positive();
          a.polarity = Polarity::Positive;
          for (auto v : a.args)
            if (v.is_free()) throw c->error("effect atoms cannot use free slots");
          (neg ? s.del : s.add).push_back(std::move(a));
        }
      } else {
        throw UnsupportedFeature("unsupported action keyword " + key.atom, key.line, key.col);
      }
    }
    if (d.find_schema(s.name)) throw sec.error("duplicate action " + s.name);
    d.schemas.push_back(std::move(s));
  }

  Domain read(std::string_view text) {
    SExpr top = read_sexpr(text);
    if (!top.head_is("define") || top.items.size() < 2 || !top.items[1].head_is("domain") ||
        top.items[1].items.size() != 2 || top.items[1].items[1].is_list)
      throw top.error("expected (define (domain NAME) ...)");
    d.name = top.items[1].items[1].atom;
    d.flavor = plus ? Flavor::StripsPlus : Flavor::Strips;
    for (std::size_t i = 2; i < top.items.size(); ++i) {
      const auto& sec = top.items[i];
      if (!sec.is_list || sec.items.empty() || sec.items[0].is_list) throw sec.error("malformed domain section");
      const std::string& key = sec.items[0].atom;
      if (key == ":requirements") {
        read_requirements(sec);
      } else if (key == ":types") {
        read_types(sec);
      } else if (key == ":predicates") {
        read_predicates(sec);
      } else if (key == ":action") {
        read_action(sec);
      } else {
        throw UnsupportedFeature("unsupported domain section " + key, sec.line, sec.col);
      }
    }
    canonicalize_domain(d);
    validate_domain(d);
    return d;
  }
};

bool type_matches(const Domain& d, const std::string& type, const TypeSet& allowed) {
  return std::any_of(allowed.begin(), allowed.end(),
                     [&](const std::string& a) { return a == "object" || d.is_subtype(type, a); });
}

std::string type_text(const TypeSet& t) {
  if (t.size() == 1) return t.front();
  std::string out = "(either";
  for (const auto& s : t) out += " " + s;
  return out + ")";
}

std::string native_atom(const LiftedAtom& a, const Domain& d, bool negated) {
  std::string out = "(" + d.predicates[a.predicate].name;
  for (auto v : a.args) out += " " + render_slot(v);
  out += ")";
  if (negated) out = "(not " + out + ")";
  return out;
}

}  // namespace

Domain parse_domain(std::string_view text) {
  DomainReader r;
  return r.read(text);
}

Domain parse_stripsplus_domain(std::string_view text) {
  DomainReader r;
  r.plus = true;
  return r.read(text);
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  SExpr top = read_sexpr(text);
  if (!top.head_is("define") || top.items.size() < 2 || !top.items[1].head_is("problem") ||
      top.items[1].items.size() != 2)
    throw top.error("expected (define (problem NAME) ...)");
  Problem p;
  p.name = top.items[1].items[1].atom;
  std::vector<GroundAtom> init;
  auto ground = [&](const SExpr& e) {
    if (!e.is_list || e.items.empty() || e.items[0].is_list) throw e.error("malformed ground atom");
    if (e.head_is("not")) throw UnsupportedFeature("negative literals in problems are not supported", e.line, e.col);
    auto pid = domain.find_predicate(e.items[0].atom);
    if (!pid) throw e.error("undeclared predicate " + e.items[0].atom);
    const auto& sig = domain.predicates[*pid];
    if (e.items.size() - 1 != sig.arity()) throw e.error("arity mismatch for " + sig.name);
    GroundAtom g;
    g.pred = *pid;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (e.items[i].is_list) throw e.items[i].error("expected an object name");
      auto oid = p.objects.find(e.items[i].atom);
      if (!oid) throw e.items[i].error("undeclared object " + e.items[i].atom);
      if (!type_matches(domain, p.objects.types[*oid], sig.position_types[i - 1]))
        throw e.items[i].error("type mismatch: " + e.items[i].atom + " in position " + std::to_string(i) + " of " +
                               sig.name);
      g.args[i - 1] = *oid;
    }
    return g;
  };
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const auto& sec = top.items[i];
    if (!sec.is_list || sec.items.empty() || sec.items[0].is_list) throw sec.error("malformed problem section");
    const std::string& key = sec.items[0].atom;
    if (key == ":domain") {
      if (sec.items.size() != 2) throw sec.error("malformed :domain");
      p.domain_name = sec.items[1].atom;
    } else if (key == ":objects") {
      for (auto& tn : read_typed_list(sec, 1)) {
        if (tn.type.size() != 1) throw tn.where->error("objects need a single type");
        const auto& t = tn.type.front();
        if (t != "object" &&
            std::none_of(domain.types.begin(), domain.types.end(), [&](const TypeDecl& td) { return td.name == t; }))
          throw tn.where->error("undeclared type " + t);
        p.objects.add(tn.name, t);
      }
    } else if (key == ":init") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) init.push_back(ground(sec.items[k]));
    } else if (key == ":goal") {
      if (sec.items.size() != 2) throw sec.error("malformed :goal");
      const auto& g = sec.items[1];
      std::vector<const SExpr*> parts;
      if (g.head_is("and")) {
        for (std::size_t k = 1; k < g.items.size(); ++k) parts.push_back(&g.items[k]);
      } else if (g.is_list && !g.items.empty()) {
        parts.push_back(&g);
      }
      for (const auto* part : parts)
        if (part->is_list && !part->items.empty() && !part->items[0].is_list && domain.find_predicate(part->items[0].atom))
          p.goal.push_back(ground(*part));
    } else if (key == ":requirements") {
      continue;
    } else {
      throw UnsupportedFeature("unsupported problem section " + key, sec.line, sec.col);
    }
  }
  if (!p.domain_name.empty() && p.domain_name != domain.name)
    throw top.error("problem is for domain " + p.domain_name + ", not " + domain.name);
  p.init = State(std::move(init));
  return p;
}

std::string write_stripsplus_domain(const Domain& d, DomainStyle style) {
  std::ostringstream out;
  const bool flat = style == DomainStyle::Flattened;
  out << "(define (domain " << d.name << ")\n";
  out << "  (:requirements :strips :typing :negative-preconditions" << (flat ? "" : " :implicit-arguments") << ")\n";
  if (!d.types.empty()) {
    out << "  (:types";
    for (const auto& t : d.types) out << "\n    " << t.name << (t.parent.empty() ? "" : " - " + t.parent);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << "\n    (" << p.name;
    for (std::size_t i = 0; i < p.arity(); ++i) out << " ?p" << (i + 1) << " - " << type_text(p.position_types[i]);
    out << ")";
  }
  out << ")";
  for (const auto& s : d.schemas) {
    out << "\n  (:action " << s.name << "\n";
    if (!flat) {
      out << "    :parameters (";
      for (std::size_t i = 0; i < s.params.size(); ++i)
        out << (i ? " " : "") << s.params[i].name << " - " << type_text(s.params[i].type);
      out << ")\n";
      for (const auto& q : s.binding.strata) {
        out << "    :implicit (z" << q.introduces;
        for (const auto& a : q.atoms) out << " " << native_atom(a, d, !a.positive());
        out << ")\n";
      }
      out << "    :precondition (and";
      for (const auto& a : s.pre) out << " " << native_atom(a, d, !a.positive());
      out << ")\n";
      out << "    :effect (and";
      for (const auto& a : s.add) out << " " << native_atom(a, d, false);
      for (const auto& a : s.del) out << " " << native_atom(a, d, true);
      out << "))";
      continue;
    }
    // Flattened view: explicit ?xi, implicit ?zj, positive free slots ?yk.
    std::vector<std::string> params;
    for (std::size_t i = 0; i < s.params.size(); ++i)
      params.push_back("?x" + std::to_string(i + 1) + " - " + type_text(s.params[i].type));
    for (std::size_t j = 0; j < s.binding.size(); ++j) params.push_back("?z" + std::to_string(j + 1));
    int y = 0;
    std::vector<std::string> pre;
    auto slot = [&](VariableRef v, std::string& quant) -> std::string {
      if (v.is_explicit()) return "?x" + std::to_string(v.index);
      if (v.is_implicit()) return "?z" + std::to_string(v.index);
      std::string name = "?y" + std::to_string(++y);
      quant += " " + name;
      return name;
    };
    auto emit = [&](const LiftedAtom& a) {
      std::string quant;
      std::string body = "(" + d.predicates[a.predicate].name;
      for (auto v : a.args) body += " " + slot(v, quant);
      body += ")";
      if (a.positive()) {
        if (!quant.empty()) {
          std::istringstream names(quant);
          std::string n;
          while (names >> n) params.push_back(n);
        }
        pre.push_back(body);
      } else if (quant.empty()) {
        pre.push_back("(not " + body + ")");
      } else {
        pre.push_back("(forall (" + quant.substr(1) + ") (not " + body + "))");
      }
    };
    for (const auto& q : s.binding.strata)
      for (const auto& a : q.atoms) emit(a);
    for (const auto& a : s.pre) emit(a);
    out << "    :parameters (";
    for (std::size_t i = 0; i < params.size(); ++i) out << (i ? " " : "") << params[i];
    out << ")\n    :precondition (and";
    for (const auto& p : pre) out << " " << p;
    out << ")\n    :effect (and";
    std::string dummy;
    auto eff = [&](const LiftedAtom& a) {
      std::string body = "(" + d.predicates[a.predicate].name;
      for (auto v : a.args) body += " " + slot(v, dummy);
      return body + ")";
    };
    for (const auto& a : s.add) out << " " << eff(a);
    for (const auto& a : s.del) out << " (not " << eff(a) << ")";
    out << "))";
  }
  out << ")\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace stripsplus
