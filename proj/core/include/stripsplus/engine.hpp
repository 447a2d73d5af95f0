#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stripsplus/model.hpp"

namespace stripsplus {

/// Per-state lookup structure: atoms grouped by predicate and an inverted
/// index from (predicate, position, object) to atoms. Holds a pointer to the
/// indexed state, which must outlive the index.
class StateIndex {
 public:
  StateIndex(const State& state, std::size_t num_predicates);

  [[nodiscard]] const State& state() const noexcept { return *state_; }
  [[nodiscard]] bool contains(const GroundAtom& a) const { return state_->contains(a); }
  [[nodiscard]] std::span<const GroundAtom> atoms_of(PredId p) const;
  /// Atoms of `p` whose argument `pos` is `o`.
  [[nodiscard]] std::span<const std::uint32_t> with(PredId p, std::size_t pos, ObjectId o) const;
  [[nodiscard]] std::size_t num_predicates() const noexcept { return pred_begin_.size() - 1; }

 private:
  const State* state_;
  std::vector<std::uint32_t> pred_begin_;
  std::vector<std::uint32_t> range_;  // per pred*kMaxArity+pos, offsets into the flat arrays
  std::vector<ObjectId> flat_obj_;
  std::vector<std::uint32_t> flat_idx_;
};

/// Quantification domain of each (predicate, position): the objects that may
/// fill that slot. Negative atoms read their free slots universally over it.
class PositionDomains {
 public:
  PositionDomains() = default;
  PositionDomains(std::vector<std::vector<std::vector<ObjectId>>> per_position, std::size_t num_objects);

  [[nodiscard]] std::span<const ObjectId> objects(PredId p, std::size_t pos) const { return objects_[p][pos]; }
  [[nodiscard]] bool contains(PredId p, std::size_t pos, ObjectId o) const {
    return o < num_objects_ && member_[(static_cast<std::size_t>(p) * kMaxArity + pos) * num_objects_ + o];
  }
  [[nodiscard]] std::size_t num_objects() const noexcept { return num_objects_; }
  [[nodiscard]] std::size_t num_predicates() const noexcept { return objects_.size(); }

 private:
  std::vector<std::vector<std::vector<ObjectId>>> objects_;
  std::vector<bool> member_;
  std::size_t num_objects_ = 0;
};

/// True if an object of `type` may fill a slot typed `allowed`.
[[nodiscard]] bool type_matches(std::span<const TypeDecl> hierarchy, const std::string& type, const TypeSet& allowed);

/// Domains from declared position types: every object whose type matches.
[[nodiscard]] PositionDomains build_position_domains(std::span<const PredicateSig> preds,
                                                     std::span<const TypeDecl> hierarchy, const ObjectTable& objects);

/// What the traces reveal about typing: objects observed per position and
/// the type labels of those objects.
struct TypeInfo {
  std::vector<std::vector<std::vector<ObjectId>>> observed;  // [pred][pos], single-trace object ids
  std::vector<std::vector<TypeSet>> labels;                  // [pred][pos], sorted labels
};

/// Scans all states of traces sharing one predicate table. `observed` is
/// taken from the first trace; labels are unioned over all of them.
[[nodiscard]] TypeInfo infer_position_domains(std::span<const Trace> traces);

/// Evaluation substrate for one state.
struct EvalContext {
  const StateIndex& index;
  const PositionDomains& domains;
};

/// A conjunction of lifted atoms prepared for repeated evaluation. Variables
/// are numbered x1..xn then z1..zm; `targets` lists the variables to
/// enumerate, every other non-free variable must be bound on entry.
class CompiledQuery {
 public:
  CompiledQuery() = default;
  CompiledQuery(std::span<const LiftedAtom> atoms, std::size_t n_explicit, std::size_t n_implicit,
                std::span<const VariableRef> targets);

  /// Distinct projections onto the targets, stopping once `limit` distinct
  /// projections are found. `values` is a full variable vector (x then z)
  /// with targets set to kNoObject; it is restored on return.
  std::size_t solve(const EvalContext& ctx, std::vector<ObjectId>& values, std::size_t limit,
                    std::vector<std::vector<ObjectId>>* out) const;

  /// All atoms hold with every variable bound (no targets).
  [[nodiscard]] bool holds(const EvalContext& ctx, const std::vector<ObjectId>& values) const;

  [[nodiscard]] std::size_t num_vars() const noexcept { return n_vars_; }

 private:
  static constexpr std::uint8_t kFree = 0xFF;
  struct Atom {
    PredId pred = 0;
    std::uint8_t arity = 0;
    bool positive = true;
    std::array<std::uint8_t, kMaxArity> slot{};  // variable id or kFree
  };
  enum class StepKind : std::uint8_t { Check, Scan, Enumerate };
  struct Step {
    StepKind kind;
    std::uint16_t atom = 0;  // Check/Scan
    std::uint8_t var = 0;    // Enumerate
    std::vector<std::uint8_t> binds;  // variables bound by this step
  };

  bool recurse(const EvalContext& ctx, std::size_t step, std::vector<ObjectId>& values, std::size_t limit,
               std::vector<std::vector<ObjectId>>& found) const;
  bool check(const EvalContext& ctx, const Atom& a, const std::vector<ObjectId>& values) const;
  bool var_typed(const EvalContext& ctx, std::uint8_t var, ObjectId o) const;

  std::vector<Atom> atoms_;
  std::vector<Step> steps_;
  std::vector<std::uint8_t> targets_;
  std::vector<std::vector<std::pair<PredId, std::uint8_t>>> occupies_;  // var -> positions
  std::size_t n_vars_ = 0;
};

/// Set-of-assignments form used by the learner's tests and by callers that
/// want the plain semantics. Throws Error if an atom mentions a non-free
/// variable that is neither bound in `fixed` nor a target.
[[nodiscard]] std::vector<Assignment> satisfying_assignments(std::span<const LiftedAtom> atoms, const EvalContext& ctx,
                                                             const Assignment& fixed,
                                                             std::span<const VariableRef> targets);

/// True iff no typed filling of the free slots makes the atom true.
[[nodiscard]] bool eval_negated(const LiftedAtom& atom, const EvalContext& ctx, const Assignment& fixed);

/// A stratum produced two or more values for its variable in a state where
/// the action's precondition is otherwise satisfiable.
class ModelIntegrityFault : public Error {
 public:
  ModelIntegrityFault(std::string action, int stratum, std::vector<ObjectId> candidates);
  std::string action;
  int stratum;
  std::vector<ObjectId> candidates;
};

/// An action schema with its strata and extra preconditions compiled.
class CompiledSchema {
 public:
  CompiledSchema(const ActionSchema& schema, std::size_t num_predicates);

  [[nodiscard]] const ActionSchema& schema() const noexcept { return *schema_; }

  /// z values if applicable, nothing otherwise. Throws ModelIntegrityFault.
  [[nodiscard]] std::optional<std::vector<ObjectId>> applicable(const EvalContext& ctx,
                                                                std::span<const ObjectId> args) const;
  [[nodiscard]] State successor(const State& s, std::span<const ObjectId> args,
                                std::span<const ObjectId> zbind) const;
  /// Ground add/delete atoms for a binding.
  void ground_effects(std::span<const ObjectId> args, std::span<const ObjectId> zbind, std::vector<GroundAtom>& add,
                      std::vector<GroundAtom>& del) const;

  /// Candidate explicit tuples (injective, typed) worth testing in a state.
  void candidate_tuples(const EvalContext& ctx, const std::vector<std::vector<ObjectId>>& param_objects,
                        std::vector<std::vector<ObjectId>>& out) const;

 private:
  bool search(const EvalContext& ctx, std::size_t k, std::vector<ObjectId>& values) const;

  const ActionSchema* schema_;
  std::vector<CompiledQuery> strata_;
  CompiledQuery extra_;
  CompiledQuery seed_;  // positive explicit-only atoms
  std::vector<std::uint8_t> seed_targets_;
  std::size_t nx_ = 0;
};

/// A domain compiled against one object table.
class CompiledDomain {
 public:
  CompiledDomain(const Domain& domain, const ObjectTable& objects);
  CompiledDomain(const CompiledDomain&) = delete;
  CompiledDomain& operator=(const CompiledDomain&) = delete;

  [[nodiscard]] const Domain& domain() const noexcept { return *domain_; }
  [[nodiscard]] const PositionDomains& domains() const noexcept { return domains_; }
  [[nodiscard]] const CompiledSchema& schema(std::size_t i) const { return schemas_[i]; }
  [[nodiscard]] const CompiledSchema* find(std::string_view name) const;
  [[nodiscard]] const std::vector<ObjectId>& param_objects(std::size_t schema, std::size_t param) const {
    return param_objects_[schema][param];
  }

  /// Every applicable ground action, sorted by action name then argument
  /// object names. Throws ModelIntegrityFault.
  [[nodiscard]] std::vector<GroundAction> enumerate_applicable(const State& s) const;

  /// Applicability plus successor for one ground action.
  [[nodiscard]] std::optional<State> apply(const State& s, const GroundAction& a) const;

 private:
  const Domain* domain_;
  const ObjectTable* objects_;
  PositionDomains domains_;
  std::vector<CompiledSchema> schemas_;
  std::vector<std::vector<std::vector<ObjectId>>> param_objects_;
};

/// All states of one trace re-expressed in a target predicate table, each
/// with its index. State k is the init state for k = 0, else the state after
/// step k-1.
class IndexedTrace {
 public:
  IndexedTrace(const Trace& trace, std::span<const PredicateSig> preds, PositionDomains domains);
  IndexedTrace(const IndexedTrace&) = delete;
  IndexedTrace& operator=(const IndexedTrace&) = delete;

  [[nodiscard]] const Trace& trace() const noexcept { return *trace_; }
  [[nodiscard]] std::size_t num_states() const noexcept { return states_.size(); }
  [[nodiscard]] const State& state(std::size_t k) const { return states_[k]; }
  [[nodiscard]] const StateIndex& index(std::size_t k) const { return indexes_[k]; }
  [[nodiscard]] EvalContext ctx(std::size_t k) const { return EvalContext{indexes_[k], domains_}; }
  [[nodiscard]] const PositionDomains& domains() const noexcept { return domains_; }

 private:
  const Trace* trace_;
  std::vector<State> states_;
  std::vector<StateIndex> indexes_;
  PositionDomains domains_;
};

[[nodiscard]] State ground_init(const Problem& problem);

/// Plain STRIPS semantics (binding query must be empty).
[[nodiscard]] bool strips_applicable(const ActionSchema& schema, std::span<const ObjectId> args, const State& s);
[[nodiscard]] State strips_successor(const State& s, const ActionSchema& schema, std::span<const ObjectId> args);

/// Convenience wrappers building a throwaway index.
[[nodiscard]] std::optional<std::vector<ObjectId>> plus_applicable(const ActionSchema& schema,
                                                                   std::span<const ObjectId> args, const State& s,
                                                                   const PositionDomains& domains,
                                                                   std::size_t num_predicates);
[[nodiscard]] State plus_successor(const State& s, const ActionSchema& schema, std::span<const ObjectId> args,
                                   std::span<const ObjectId> zbind);

}  // namespace stripsplus
