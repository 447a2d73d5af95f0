#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stripsplus/engine.hpp"
#include "stripsplus/model.hpp"

namespace stripsplus {

enum class TestVerdict { Valid, NotValid, NotDetermined, Subsumed };

[[nodiscard]] const char* to_string(TestVerdict v);

/// Training traces merged onto one predicate table (union of the observed
/// predicates, name-sorted) with label-based position domains per trace.
class LearningData {
 public:
  explicit LearningData(std::span<const Trace> traces);
  LearningData(const LearningData&) = delete;
  LearningData& operator=(const LearningData&) = delete;

  [[nodiscard]] std::span<const Trace> traces() const noexcept { return traces_; }
  [[nodiscard]] const IndexedTrace& indexed(std::size_t t) const { return *indexed_[t]; }
  /// Predicate table with position types set to the observed labels.
  [[nodiscard]] const std::vector<PredicateSig>& predicates() const noexcept { return predicates_; }
  [[nodiscard]] const TypeInfo& type_info() const noexcept { return info_; }
  [[nodiscard]] std::vector<std::string> all_labels() const;

 private:
  std::span<const Trace> traces_;
  std::vector<PredicateSig> predicates_;
  TypeInfo info_;
  std::vector<std::unique_ptr<IndexedTrace>> indexed_;
};

/// Learner state for one action: its occurrences and the current binding
/// prefix with the z values it yields at each occurrence.
class ActionLearner {
 public:
  ActionLearner(const LearningData& data, OccurrenceSet occ);

  [[nodiscard]] const OccurrenceSet& occurrences() const noexcept { return occ_; }
  [[nodiscard]] std::size_t arity() const noexcept { return nx_; }
  [[nodiscard]] const StratifiedQuery& binding() const noexcept { return binding_; }
  [[nodiscard]] const std::vector<std::vector<ObjectId>>& z_values() const noexcept { return zvals_; }

  /// Candidate atoms for the next stratum, canonically ordered.
  [[nodiscard]] std::vector<LiftedAtom> candidate_space() const;

  /// Verdict for `candidate` as stratum prefix+1. Instance-constant
  /// candidates are reported as Subsumed.
  [[nodiscard]] TestVerdict test(const std::vector<LiftedAtom>& candidate);

  /// Breadth-first search for the next stratum; nothing if maximal.
  [[nodiscard]] std::optional<Subquery> expand(std::size_t max_atoms);

  /// Appends a stratum that must be Valid.
  void push_stratum(Subquery q);

  /// expand until maximal. Throws Error past kMaxStrata strata, which only
  /// happens when an action has very few occurrences.
  void synthesize(std::size_t max_atoms);
  static constexpr std::size_t kMaxStrata = 64;

  [[nodiscard]] std::vector<LiftedAtom> mine_extra_preconditions() const;
  /// Throws Error naming the occurrence if a change cannot be lifted.
  void mine_effects(std::vector<LiftedAtom>& add, std::vector<LiftedAtom>& del) const;

  [[nodiscard]] std::vector<TypeSet> param_types() const;

  /// Candidates rejected only because their value was instance-constant.
  [[nodiscard]] const std::vector<std::vector<LiftedAtom>>& pruned_constants() const noexcept { return pruned_; }

  [[nodiscard]] ActionSchema learn(std::size_t max_atoms);

 private:
  bool instance_constant(const std::vector<LiftedAtom>& candidate, int var) const;
  [[nodiscard]] std::vector<std::string> var_labels(VariableRef v) const;
  bool slot_compatible(PredId p, std::size_t pos, VariableRef v) const;

  const LearningData* data_;
  OccurrenceSet occ_;
  std::size_t nx_ = 0;
  StratifiedQuery binding_;
  std::vector<std::vector<ObjectId>> zvals_;  // per occurrence
  mutable std::vector<std::vector<std::vector<std::string>>> labels_cache_;
  std::vector<std::vector<LiftedAtom>> pruned_;
};

struct LearnOptions {
  std::size_t max_atoms = 3;
  std::size_t jobs = 1;
};

struct ActionReport {
  std::string action;
  std::size_t occurrences = 0;
  std::vector<std::vector<LiftedAtom>> pruned_constants;
  double seconds = 0.0;
};

struct LearnResult {
  Domain domain;
  std::vector<ActionReport> actions;
  double seconds = 0.0;
};

[[nodiscard]] LearnResult learn_domain(std::span<const Trace> traces, const LearnOptions& options = {});

/// Report text; timing lines only when `timing` is set so that the default
/// output is byte-deterministic.
[[nodiscard]] std::string render_learn_report(const LearnResult& result, bool timing);

}  // namespace stripsplus
