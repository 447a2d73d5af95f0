#pragma once

// Core value types shared by every stage of the pipeline: predicates, lifted
// atoms, stratified binding queries, action schemas, domains, problems,
// ground states and traces.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace stripsplus {

using ObjectId = std::uint16_t;
using PredId = std::uint16_t;

inline constexpr ObjectId kNoObject = 0xFFFF;
inline constexpr std::size_t kMaxArity = 4;
inline constexpr std::size_t kMaxObjects = 0x1FFF;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set of alternative type labels (`(either a b)` in PDDL). A single
/// element is the common case.
using TypeSet = std::vector<std::string>;

struct PredicateSig {
  std::string name;
  std::vector<TypeSet> position_types;

  [[nodiscard]] std::size_t arity() const noexcept { return position_types.size(); }
  friend bool operator==(const PredicateSig&, const PredicateSig&) = default;
};

enum class VarKind : std::uint8_t { Explicit = 0, Implicit = 1, Free = 2 };

/// A variable slot in a lifted atom. Explicit and Implicit refs carry a
/// 1-based index; Free refs are anonymous and always have index 0.
struct VariableRef {
  VarKind kind = VarKind::Free;
  std::uint8_t index = 0;

  static constexpr VariableRef x(int i) { return {VarKind::Explicit, static_cast<std::uint8_t>(i)}; }
  static constexpr VariableRef z(int j) { return {VarKind::Implicit, static_cast<std::uint8_t>(j)}; }
  static constexpr VariableRef free() { return {VarKind::Free, 0}; }

  [[nodiscard]] bool is_free() const noexcept { return kind == VarKind::Free; }
  [[nodiscard]] bool is_explicit() const noexcept { return kind == VarKind::Explicit; }
  [[nodiscard]] bool is_implicit() const noexcept { return kind == VarKind::Implicit; }

  friend constexpr auto operator<=>(const VariableRef&, const VariableRef&) = default;
};

enum class Polarity : std::uint8_t { Positive = 0, Negative = 1 };

/// A signed predicate pattern. Free slots are existential in positive atoms
/// and universal (over the typed position domain) in negative atoms.
struct LiftedAtom {
  PredId predicate = 0;
  std::vector<VariableRef> args;
  Polarity polarity = Polarity::Positive;

  [[nodiscard]] bool positive() const noexcept { return polarity == Polarity::Positive; }
  [[nodiscard]] bool mentions(VariableRef v) const;
  [[nodiscard]] std::size_t free_count() const;
  [[nodiscard]] int max_implicit() const;
  [[nodiscard]] int max_explicit() const;

  friend bool operator==(const LiftedAtom&, const LiftedAtom&) = default;
};

/// Total order over lifted atoms: predicate (ids are name-sorted within a
/// domain), then polarity, then the argument slots.
[[nodiscard]] std::strong_ordering compare_atoms(const LiftedAtom& a, const LiftedAtom& b);
struct AtomLess {
  bool operator()(const LiftedAtom& a, const LiftedAtom& b) const { return compare_atoms(a, b) < 0; }
};

[[nodiscard]] std::vector<LiftedAtom> canonical_atom_order(std::vector<LiftedAtom> atoms);

struct Subquery {
  std::vector<LiftedAtom> atoms;
  int introduces = 0;

  friend bool operator==(const Subquery&, const Subquery&) = default;
};

struct StratifiedQuery {
  std::vector<Subquery> strata;

  [[nodiscard]] std::size_t size() const noexcept { return strata.size(); }
  [[nodiscard]] bool empty() const noexcept { return strata.empty(); }
  friend bool operator==(const StratifiedQuery&, const StratifiedQuery&) = default;
};

struct Parameter {
  std::string name;
  TypeSet type;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// One action schema. A STRIPS schema is the special case with an empty
/// binding query and only explicit, positive atoms.
struct ActionSchema {
  std::string name;
  std::vector<Parameter> params;
  StratifiedQuery binding;
  std::vector<LiftedAtom> pre;
  std::vector<LiftedAtom> add;
  std::vector<LiftedAtom> del;

  [[nodiscard]] std::size_t arity() const noexcept { return params.size(); }
  [[nodiscard]] std::size_t implicit_count() const noexcept { return binding.size(); }
  [[nodiscard]] bool is_strips() const;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

enum class Flavor : std::uint8_t { Strips, StripsPlus };

struct TypeDecl {
  std::string name;
  std::string parent;  // empty for roots

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct Domain {
  std::string name;
  Flavor flavor = Flavor::Strips;
  std::vector<TypeDecl> types;
  std::vector<PredicateSig> predicates;  // sorted by name
  std::vector<ActionSchema> schemas;     // sorted by name

  [[nodiscard]] std::optional<PredId> find_predicate(std::string_view name) const;
  [[nodiscard]] const ActionSchema* find_schema(std::string_view name) const;
  [[nodiscard]] bool is_subtype(std::string_view type, std::string_view ancestor) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Throws Error if any structural invariant of a domain is violated.
void validate_domain(const Domain& domain);

/// Sorts predicates and schemas by name and rewrites predicate ids.
void canonicalize_domain(Domain& domain);

struct ObjectTable {
  std::vector<std::string> names;
  std::vector<std::string> types;

  [[nodiscard]] std::size_t size() const noexcept { return names.size(); }
  [[nodiscard]] std::optional<ObjectId> find(std::string_view name) const;
  ObjectId add(std::string name, std::string type);

  friend bool operator==(const ObjectTable& a, const ObjectTable& b) {
    return a.names == b.names && a.types == b.types;
  }

 private:
  std::unordered_map<std::string, ObjectId> index_;
};

struct GroundAtom {
  PredId pred = 0;
  std::array<ObjectId, kMaxArity> args{kNoObject, kNoObject, kNoObject, kNoObject};

  [[nodiscard]] std::uint64_t key() const noexcept {
    std::uint64_t k = pred;
    for (ObjectId a : args) k = (k << 13) | (a & 0x1FFF);
    return k;
  }
  friend constexpr auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const noexcept { return std::hash<std::uint64_t>{}(a.key()); }
};

/// Immutable set of ground atoms; atoms are kept sorted and deduplicated.
class State {
 public:
  State() = default;
  explicit State(std::vector<GroundAtom> atoms);

  [[nodiscard]] bool contains(const GroundAtom& atom) const { return keys_.contains(atom.key()); }
  [[nodiscard]] std::span<const GroundAtom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
  [[nodiscard]] bool empty() const noexcept { return atoms_.empty(); }

  friend bool operator==(const State& a, const State& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<GroundAtom> atoms_;
  std::unordered_set<std::uint64_t> keys_;
};

struct GroundAction {
  std::string name;
  std::vector<ObjectId> args;

  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  ObjectTable objects;
  State init;
  std::vector<GroundAtom> goal;
};

struct TraceStep {
  GroundAction action;
  State state;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// A single-instance state-action trace. Predicate ids in states refer to
/// `predicates` (name-sorted; arity only, position types unknown).
struct Trace {
  int version = 1;
  std::string domain_name;
  std::uint64_t seed = 0;
  ObjectTable objects;
  std::vector<PredicateSig> predicates;
  std::vector<std::string> dropped;
  State init;
  std::vector<TraceStep> steps;
  bool dead_end = false;

  [[nodiscard]] std::size_t length() const noexcept { return steps.size(); }
  [[nodiscard]] const State& state_before(std::size_t step) const {
    return step == 0 ? init : steps[step - 1].state;
  }
  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Partial assignment of explicit and implicit variables.
struct Assignment {
  std::vector<ObjectId> explicit_args;
  std::vector<ObjectId> implicit_args;

  [[nodiscard]] ObjectId get(VariableRef v) const;
  void set(VariableRef v, ObjectId o);
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct Occurrence {
  std::size_t trace = 0;
  std::size_t step = 0;
  std::vector<ObjectId> args;
};

/// All firings of one action across a set of traces. Each pair names the
/// trace and the step; the pre-state is trace.state_before(step) and the
/// successor is trace.steps[step].state.
struct OccurrenceSet {
  std::string action;
  std::vector<Occurrence> pairs;

  [[nodiscard]] bool empty() const noexcept { return pairs.empty(); }
};

[[nodiscard]] OccurrenceSet collect_occurrences(std::span<const Trace> traces, std::string_view action);

/// Distinct action names appearing in the traces, sorted.
[[nodiscard]] std::vector<std::string> observed_actions(std::span<const Trace> traces);

// Textual forms -----------------------------------------------------------

[[nodiscard]] std::string render_slot(VariableRef v);
[[nodiscard]] VariableRef parse_slot(std::string_view text);

/// `pred(slot,...)` with `!` prefix for negative atoms, e.g. `!at(_,1z)`.
[[nodiscard]] std::string render_pattern(const LiftedAtom& atom, std::span<const PredicateSig> preds);
[[nodiscard]] LiftedAtom parse_pattern(std::string_view text, std::span<const PredicateSig> preds);

[[nodiscard]] std::string render_ground(const GroundAtom& atom, std::span<const PredicateSig> preds,
                                        const ObjectTable& objects);

/// Atoms sorted by their rendered text; used for serialization and digests.
[[nodiscard]] std::vector<std::string> sorted_atom_strings(const State& s, std::span<const PredicateSig> preds,
                                                           const ObjectTable& objects);

[[nodiscard]] std::string to_lower(std::string_view s);

/// Maps states between two predicate tables by name; predicates missing from
/// the target table are dropped.
class PredicateMap {
 public:
  PredicateMap(std::span<const PredicateSig> from, std::span<const PredicateSig> to);
  [[nodiscard]] std::optional<PredId> map(PredId p) const {
    PredId t = table_[p];
    return t == kUnmapped ? std::nullopt : std::optional<PredId>(t);
  }
  [[nodiscard]] State apply(const State& s) const;

 private:
  static constexpr PredId kUnmapped = 0xFFFF;
  std::vector<PredId> table_;
};

}  // namespace stripsplus
