#include "stripsplus/engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace stripsplus {

namespace {

std::uint8_t var_id(VariableRef v, std::size_t nx) {
  if (v.is_free()) return 0xFF;
  if (v.is_explicit()) return static_cast<std::uint8_t>(v.index - 1);
  return static_cast<std::uint8_t>(nx + v.index - 1);
}

}  // namespace

CompiledQuery::CompiledQuery(std::span<const LiftedAtom> atoms, std::size_t nx, std::size_t nz,
                             std::span<const VariableRef> targets) {
  n_vars_ = nx + nz;
  if (n_vars_ >= kFree) throw Error("too many variables in a query");
  occupies_.resize(n_vars_);
  for (const auto& a : atoms) {
    Atom c;
    c.pred = a.predicate;
    c.arity = static_cast<std::uint8_t>(a.args.size());
    c.positive = a.positive();
    c.slot.fill(kFree);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      auto v = a.args[i];
      if (v.is_explicit() && v.index > nx) throw Error("explicit slot out of range in query");
      if (v.is_implicit() && v.index > nz) throw Error("implicit slot out of range in query");
      c.slot[i] = var_id(v, nx);
      if (c.slot[i] != kFree) occupies_[c.slot[i]].emplace_back(a.predicate, static_cast<std::uint8_t>(i));
    }
    atoms_.push_back(c);
  }
  std::vector<bool> bound(n_vars_, true);
  for (auto t : targets) {
    auto id = var_id(t, nx);
    if (id == kFree || id >= n_vars_) throw Error("bad query target");
    targets_.push_back(id);
    bound[id] = false;
  }
  std::vector<bool> done(atoms_.size(), false);
  std::size_t remaining = atoms_.size();
  auto unbound_in = [&](const Atom& a) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.arity; ++i)
      if (a.slot[i] != kFree && !bound[a.slot[i]]) ++n;
    return n;
  };
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (done[i] || unbound_in(atoms_[i]) != 0) continue;
      steps_.push_back({StepKind::Check, static_cast<std::uint16_t>(i), 0, {}});
      done[i] = true;
      --remaining;
      progressed = true;
    }
    if (remaining == 0) break;
    if (progressed) continue;
    int best = -1;
    std::size_t best_bound = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (done[i] || !atoms_[i].positive) continue;
      std::size_t nb = 0;
      for (std::size_t k = 0; k < atoms_[i].arity; ++k)
        if (atoms_[i].slot[k] != kFree && bound[atoms_[i].slot[k]]) ++nb;
      if (best < 0 || nb > best_bound) {
        best = static_cast<int>(i);
        best_bound = nb;
      }
    }
    if (best >= 0) {
      Step s{StepKind::Scan, static_cast<std::uint16_t>(best), 0, {}};
      const auto& a = atoms_[best];
      for (std::size_t k = 0; k < a.arity; ++k) {
        auto v = a.slot[k];
        if (v != kFree && !bound[v]) {
          bound[v] = true;
          s.binds.push_back(v);
        }
      }
      steps_.push_back(std::move(s));
      done[best] = true;
      --remaining;
      continue;
    }
    for (std::size_t i = 0; i < atoms_.size() && best < 0; ++i) {
      if (done[i]) continue;
      for (std::size_t k = 0; k < atoms_[i].arity; ++k) {
        auto v = atoms_[i].slot[k];
        if (v != kFree && !bound[v]) {
          steps_.push_back({StepKind::Enumerate, 0, v, {v}});
          bound[v] = true;
          best = 0;
          break;
        }
      }
    }
  }
  for (auto t : targets_)
    if (!bound[t]) {
      steps_.push_back({StepKind::Enumerate, 0, t, {t}});
      bound[t] = true;
    }
}

bool CompiledQuery::var_typed(const EvalContext& ctx, std::uint8_t var, ObjectId o) const {
  for (auto [p, pos] : occupies_[var])
    if (!ctx.domains.contains(p, pos, o)) return false;
  return true;
}

bool CompiledQuery::check(const EvalContext& ctx, const Atom& a, const std::vector<ObjectId>& values) const {
  bool has_free = false;
  GroundAtom g;
  g.pred = a.pred;
  for (std::size_t i = 0; i < a.arity; ++i) {
    if (a.slot[i] == kFree) {
      has_free = true;
    } else {
      g.args[i] = values[a.slot[i]];
    }
  }
  if (!has_free) return ctx.index.contains(g) == a.positive;
  // Pick the narrowest bucket among bound slots.
  auto atoms = ctx.index.state().atoms();
  std::span<const std::uint32_t> bucket;
  bool have_bucket = false;
  for (std::size_t i = 0; i < a.arity; ++i) {
    if (a.slot[i] == kFree) continue;
    auto b = ctx.index.with(a.pred, i, g.args[i]);
    if (!have_bucket || b.size() < bucket.size()) {
      bucket = b;
      have_bucket = true;
    }
  }
  auto matches = [&](const GroundAtom& s) {
    for (std::size_t i = 0; i < a.arity; ++i) {
      if (a.slot[i] == kFree) {
        if (!ctx.domains.contains(a.pred, i, s.args[i])) return false;
      } else if (s.args[i] != g.args[i]) {
        return false;
      }
    }
    return true;
  };
  bool found = false;
  if (have_bucket) {
    for (auto idx : bucket)
      if (matches(atoms[idx])) {
        found = true;
        break;
      }
  } else {
    for (const auto& s : ctx.index.atoms_of(a.pred))
      if (matches(s)) {
        found = true;
        break;
      }
  }
  return found == a.positive;
}

bool CompiledQuery::recurse(const EvalContext& ctx, std::size_t step, std::vector<ObjectId>& values,
                            std::size_t limit, std::vector<std::vector<ObjectId>>& found) const {
  if (step == steps_.size()) {
    std::vector<ObjectId> proj;
    proj.reserve(targets_.size());
    for (auto t : targets_) proj.push_back(values[t]);
    if (std::find(found.begin(), found.end(), proj) == found.end()) found.push_back(std::move(proj));
    return found.size() >= limit;
  }
  const Step& s = steps_[step];
  switch (s.kind) {
    case StepKind::Check:
      if (!check(ctx, atoms_[s.atom], values)) return false;
      return recurse(ctx, step + 1, values, limit, found);
    case StepKind::Enumerate: {
      auto candidates = occupies_[s.var].empty() ? std::span<const ObjectId>{}
                                                 : ctx.domains.objects(occupies_[s.var][0].first,
                                                                       occupies_[s.var][0].second);
      if (occupies_[s.var].empty()) {
        for (std::size_t o = 0; o < ctx.domains.num_objects(); ++o) {
          values[s.var] = static_cast<ObjectId>(o);
          if (recurse(ctx, step + 1, values, limit, found)) {
            values[s.var] = kNoObject;
            return true;
          }
        }
      } else {
        for (auto o : candidates) {
          if (!var_typed(ctx, s.var, o)) continue;
          values[s.var] = o;
          if (recurse(ctx, step + 1, values, limit, found)) {
            values[s.var] = kNoObject;
            return true;
          }
        }
      }
      values[s.var] = kNoObject;
      return false;
    }
    case StepKind::Scan:
      break;
  }
  const Atom& a = atoms_[s.atom];
  auto atoms = ctx.index.state().atoms();
  std::span<const std::uint32_t> bucket;
  bool have_bucket = false;
  for (std::size_t i = 0; i < a.arity; ++i) {
    auto v = a.slot[i];
    if (v == kFree || values[v] == kNoObject) continue;
    auto b = ctx.index.with(a.pred, i, values[v]);
    if (!have_bucket || b.size() < bucket.size()) {
      bucket = b;
      have_bucket = true;
    }
  }
  auto attempt = [&](const GroundAtom& g) -> bool {
    bool ok = true;
    for (std::size_t i = 0; i < a.arity && ok; ++i) {
      auto v = a.slot[i];
      ObjectId o = g.args[i];
      if (v == kFree) {
        ok = ctx.domains.contains(a.pred, i, o);
      } else if (values[v] != kNoObject) {
        ok = values[v] == o;
      } else {
        ok = var_typed(ctx, v, o);
        if (ok) values[v] = o;
      }
    }
    bool stop = ok && recurse(ctx, step + 1, values, limit, found);
    for (auto v : s.binds) values[v] = kNoObject;
    return stop;
  };
  if (have_bucket) {
    for (auto idx : bucket)
      if (attempt(atoms[idx])) return true;
  } else {
    for (const auto& g : ctx.index.atoms_of(a.pred))
      if (attempt(g)) return true;
  }
  return false;
}

std::size_t CompiledQuery::solve(const EvalContext& ctx, std::vector<ObjectId>& values, std::size_t limit,
                                 std::vector<std::vector<ObjectId>>* out) const {
  std::vector<std::vector<ObjectId>> found;
  if (limit == 0) limit = std::numeric_limits<std::size_t>::max();
  recurse(ctx, 0, values, limit, found);
  std::size_t n = found.size();
  if (out) *out = std::move(found);
  return n;
}

bool CompiledQuery::holds(const EvalContext& ctx, const std::vector<ObjectId>& values) const {
  auto& v = const_cast<std::vector<ObjectId>&>(values);
  std::vector<std::vector<ObjectId>> found;
  return recurse(ctx, 0, v, 1, found);
}

std::vector<Assignment> satisfying_assignments(std::span<const LiftedAtom> atoms, const EvalContext& ctx,
                                               const Assignment& fixed, std::span<const VariableRef> targets) {
  std::size_t nx = fixed.explicit_args.size();
  std::size_t nz = fixed.implicit_args.size();
  auto widen = [&](VariableRef v) {
    if (v.is_explicit()) nx = std::max<std::size_t>(nx, v.index);
    if (v.is_implicit()) nz = std::max<std::size_t>(nz, v.index);
  };
  for (const auto& a : atoms)
    for (auto v : a.args) widen(v);
  for (auto t : targets) {
    if (!t.is_implicit() && !t.is_explicit()) throw Error("targets must be named variables");
    widen(t);
  }
  std::vector<ObjectId> values(nx + nz, kNoObject);
  for (std::size_t i = 0; i < fixed.explicit_args.size(); ++i) values[i] = fixed.explicit_args[i];
  for (std::size_t j = 0; j < fixed.implicit_args.size(); ++j) values[nx + j] = fixed.implicit_args[j];
  for (auto t : targets) values[t.is_explicit() ? t.index - 1 : nx + t.index - 1] = kNoObject;
  for (const auto& a : atoms)
    for (auto v : a.args) {
      if (v.is_free()) continue;
      bool is_target = std::find(targets.begin(), targets.end(), v) != targets.end();
      std::size_t id = v.is_explicit() ? v.index - 1 : nx + v.index - 1;
      if (!is_target && values[id] == kNoObject)
        throw Error("unbound variable " + render_slot(v) + " in query atom");
    }
  CompiledQuery q(atoms, nx, nz, targets);
  std::vector<std::vector<ObjectId>> proj;
  q.solve(ctx, values, 0, &proj);
  std::sort(proj.begin(), proj.end());
  std::vector<Assignment> out;
  for (const auto& p : proj) {
    Assignment a;
    for (std::size_t k = 0; k < targets.size(); ++k) a.set(targets[k], p[k]);
    out.push_back(std::move(a));
  }
  return out;
}

bool eval_negated(const LiftedAtom& atom, const EvalContext& ctx, const Assignment& fixed) {
  if (atom.positive()) throw Error("eval_negated needs a negative atom");
  return !satisfying_assignments(std::span<const LiftedAtom>(&atom, 1), ctx, fixed, {}).empty();
}

ModelIntegrityFault::ModelIntegrityFault(std::string a, int k, std::vector<ObjectId> c)
    : Error("model-integrity fault: action " + a + " stratum " + std::to_string(k) + " has " +
            std::to_string(c.size()) + " candidate values"),
      action(std::move(a)),
      stratum(k),
      candidates(std::move(c)) {}

CompiledSchema::CompiledSchema(const ActionSchema& schema, std::size_t) : schema_(&schema) {
  nx_ = schema.params.size();
  std::size_t nz = schema.binding.size();
  for (std::size_t k = 0; k < nz; ++k) {
    VariableRef t = VariableRef::z(static_cast<int>(k + 1));
    strata_.emplace_back(schema.binding.strata[k].atoms, nx_, nz, std::span<const VariableRef>(&t, 1));
  }
  extra_ = CompiledQuery(schema.pre, nx_, nz, {});
  std::vector<LiftedAtom> seed;
  std::vector<VariableRef> seed_vars;
  auto consider = [&](const LiftedAtom& a) {
    if (!a.positive()) return;
    bool explicit_only = true;
    bool any = false;
    for (auto v : a.args) {
      if (v.is_implicit()) explicit_only = false;
      if (v.is_explicit()) any = true;
    }
    if (!explicit_only || !any) return;
    seed.push_back(a);
    for (auto v : a.args)
      if (v.is_explicit() && std::find(seed_vars.begin(), seed_vars.end(), v) == seed_vars.end())
        seed_vars.push_back(v);
  };
  for (const auto& q : schema.binding.strata)
    for (const auto& a : q.atoms) consider(a);
  for (const auto& a : schema.pre) consider(a);
  std::sort(seed_vars.begin(), seed_vars.end());
  for (auto v : seed_vars) seed_targets_.push_back(static_cast<std::uint8_t>(v.index - 1));
  if (!seed.empty()) seed_ = CompiledQuery(seed, nx_, 0, seed_vars);
}

bool CompiledSchema::search(const EvalContext& ctx, std::size_t k, std::vector<ObjectId>& values) const {
  if (k == strata_.size()) return extra_.holds(ctx, values);
  std::vector<std::vector<ObjectId>> cands;
  strata_[k].solve(ctx, values, 0, &cands);
  for (const auto& c : cands) {
    values[nx_ + k] = c[0];
    if (search(ctx, k + 1, values)) {
      if (cands.size() >= 2) {
        std::vector<ObjectId> vals;
        for (const auto& d : cands) vals.push_back(d[0]);
        std::sort(vals.begin(), vals.end());
        throw ModelIntegrityFault(schema_->name, static_cast<int>(k + 1), std::move(vals));
      }
      return true;
    }
  }
  values[nx_ + k] = kNoObject;
  return false;
}

std::optional<std::vector<ObjectId>> CompiledSchema::applicable(const EvalContext& ctx,
                                                                std::span<const ObjectId> args) const {
  if (args.size() != nx_) throw Error("arity mismatch for " + schema_->name);
  std::vector<ObjectId> values(nx_ + strata_.size(), kNoObject);
  std::copy(args.begin(), args.end(), values.begin());
  if (!search(ctx, 0, values)) return std::nullopt;
  return std::vector<ObjectId>(values.begin() + static_cast<std::ptrdiff_t>(nx_), values.end());
}

void CompiledSchema::ground_effects(std::span<const ObjectId> args, std::span<const ObjectId> zbind,
                                    std::vector<GroundAtom>& add, std::vector<GroundAtom>& del) const {
  auto ground = [&](const LiftedAtom& a) {
    GroundAtom g;
    g.pred = a.predicate;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      auto v = a.args[i];
      if (v.is_explicit()) {
        g.args[i] = args[v.index - 1];
      } else if (v.is_implicit()) {
        g.args[i] = zbind[v.index - 1];
      } else {
        throw Error("effect atom with a free slot in " + schema_->name);
      }
    }
    return g;
  };
  add.clear();
  del.clear();
  for (const auto& a : schema_->add) add.push_back(ground(a));
  for (const auto& a : schema_->del) del.push_back(ground(a));
}

State CompiledSchema::successor(const State& s, std::span<const ObjectId> args,
                                std::span<const ObjectId> zbind) const {
  std::vector<GroundAtom> add, del;
  ground_effects(args, zbind, add, del);
  std::sort(del.begin(), del.end());
  std::vector<GroundAtom> out;
  out.reserve(s.size() + add.size());
  for (const auto& a : s.atoms())
    if (!std::binary_search(del.begin(), del.end(), a)) out.push_back(a);
  out.insert(out.end(), add.begin(), add.end());
  return State(std::move(out));
}

void CompiledSchema::candidate_tuples(const EvalContext& ctx, const std::vector<std::vector<ObjectId>>& param_objects,
                                      std::vector<std::vector<ObjectId>>& out) const {
  out.clear();
  std::vector<std::vector<ObjectId>> seeds;
  std::vector<bool> seeded(nx_, false);
  if (!seed_targets_.empty()) {
    std::vector<ObjectId> values(nx_, kNoObject);
    seed_.solve(ctx, values, 0, &seeds);
    for (auto t : seed_targets_) seeded[t] = true;
  } else {
    seeds.emplace_back();
  }
  std::vector<ObjectId> tuple(nx_, kNoObject);
  for (const auto& sd : seeds) {
    bool ok = true;
    for (std::size_t k = 0; k < seed_targets_.size() && ok; ++k) {
      auto p = seed_targets_[k];
      ok = std::binary_search(param_objects[p].begin(), param_objects[p].end(), sd[k]);
      tuple[p] = sd[k];
    }
    if (!ok) continue;
    // Fill the remaining parameters from their typed object lists.
    auto fill = [&](auto&& self, std::size_t i) -> void {
      if (i == nx_) {
        for (std::size_t a = 0; a < nx_; ++a)
          for (std::size_t b = a + 1; b < nx_; ++b)
            if (tuple[a] == tuple[b]) return;
        out.push_back(tuple);
        return;
      }
      if (seeded[i]) {
        self(self, i + 1);
        return;
      }
      for (auto o : param_objects[i]) {
        tuple[i] = o;
        self(self, i + 1);
      }
    };
    fill(fill, 0);
  }
}

CompiledDomain::CompiledDomain(const Domain& domain, const ObjectTable& objects)
    : domain_(&domain),
      objects_(&objects),
      domains_(build_position_domains(domain.predicates, domain.types, objects)) {
  for (const auto& s : domain.schemas) {
    schemas_.emplace_back(s, domain.predicates.size());
    std::vector<std::vector<ObjectId>> per;
    for (const auto& p : s.params) {
      std::vector<ObjectId> objs;
      for (std::size_t o = 0; o < objects.size(); ++o)
        if (type_matches(domain.types, objects.types[o], p.type)) objs.push_back(static_cast<ObjectId>(o));
      per.push_back(std::move(objs));
    }
    param_objects_.push_back(std::move(per));
  }
}

const CompiledSchema* CompiledDomain::find(std::string_view name) const {
  for (const auto& s : schemas_)
    if (s.schema().name == name) return &s;
  return nullptr;
}

std::vector<GroundAction> CompiledDomain::enumerate_applicable(const State& s) const {
  StateIndex idx(s, domain_->predicates.size());
  EvalContext ctx{idx, domains_};
  std::vector<std::size_t> rank(objects_->size());
  {
    std::vector<std::size_t> order(objects_->size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return objects_->names[a] < objects_->names[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  }
  std::vector<GroundAction> out;
  std::vector<std::vector<ObjectId>> tuples;
  for (std::size_t k = 0; k < schemas_.size(); ++k) {
    schemas_[k].candidate_tuples(ctx, param_objects_[k], tuples);
    std::vector<std::vector<ObjectId>> ok;
    for (auto& t : tuples)
      if (schemas_[k].applicable(ctx, t)) ok.push_back(std::move(t));
    std::sort(ok.begin(), ok.end(), [&](const auto& a, const auto& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [&](ObjectId x, ObjectId y) { return rank[x] < rank[y]; });
    });
    ok.erase(std::unique(ok.begin(), ok.end()), ok.end());
    for (auto& t : ok) out.push_back({schemas_[k].schema().name, std::move(t)});
  }
  return out;
}

std::optional<State> CompiledDomain::apply(const State& s, const GroundAction& a) const {
  for (std::size_t k = 0; k < schemas_.size(); ++k) {
    if (schemas_[k].schema().name != a.name) continue;
    if (a.args.size() != param_objects_[k].size()) return std::nullopt;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const auto& objs = param_objects_[k][i];
      if (!std::binary_search(objs.begin(), objs.end(), a.args[i])) return std::nullopt;
      for (std::size_t j = 0; j < i; ++j)
        if (a.args[i] == a.args[j]) return std::nullopt;
    }
    StateIndex idx(s, domain_->predicates.size());
    EvalContext ctx{idx, domains_};
    auto z = schemas_[k].applicable(ctx, a.args);
    if (!z) return std::nullopt;
    return schemas_[k].successor(s, a.args, *z);
  }
  return std::nullopt;
}

State ground_init(const Problem& problem) { return problem.init; }

namespace {

GroundAtom ground_explicit(const LiftedAtom& a, std::span<const ObjectId> args, const std::string& action) {
  GroundAtom g;
  g.pred = a.predicate;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!a.args[i].is_explicit()) throw Error("non-explicit slot in STRIPS action " + action);
    g.args[i] = args[a.args[i].index - 1];
  }
  return g;
}

}  // namespace

bool strips_applicable(const ActionSchema& schema, std::span<const ObjectId> args, const State& s) {
  if (args.size() != schema.params.size()) throw Error("arity mismatch for " + schema.name);
  if (!schema.binding.empty()) throw Error("strips_applicable on a schema with a binding query");
  for (const auto& a : schema.pre)
    if (s.contains(ground_explicit(a, args, schema.name)) != a.positive()) return false;
  return true;
}

State strips_successor(const State& s, const ActionSchema& schema, std::span<const ObjectId> args) {
  if (!strips_applicable(schema, args, s)) throw Error("precondition violation for " + schema.name);
  std::vector<GroundAtom> del;
  for (const auto& a : schema.del) del.push_back(ground_explicit(a, args, schema.name));
  std::sort(del.begin(), del.end());
  std::vector<GroundAtom> out;
  for (const auto& a : s.atoms())
    if (!std::binary_search(del.begin(), del.end(), a)) out.push_back(a);
  for (const auto& a : schema.add) out.push_back(ground_explicit(a, args, schema.name));
  return State(std::move(out));
}

std::optional<std::vector<ObjectId>> plus_applicable(const ActionSchema& schema, std::span<const ObjectId> args,
                                                     const State& s, const PositionDomains& domains,
                                                     std::size_t num_predicates) {
  StateIndex idx(s, num_predicates);
  EvalContext ctx{idx, domains};
  CompiledSchema cs(schema, num_predicates);
  return cs.applicable(ctx, args);
}

State plus_successor(const State& s, const ActionSchema& schema, std::span<const ObjectId> args,
                     std::span<const ObjectId> zbind) {
  CompiledSchema cs(schema, 0);
  return cs.successor(s, args, zbind);
}

}  // namespace stripsplus
