#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stripsplus/engine.hpp"
#include "stripsplus/model.hpp"

namespace stripsplus {

enum class MismatchKind { ApplicabilityPlus, ApplicabilityMinus, Effect, Structural, Fault };

[[nodiscard]] const char* to_string(MismatchKind k);

struct Mismatch {
  std::uint64_t digest = 0;
  std::string action;  // rendered ground action
  MismatchKind kind = MismatchKind::Effect;
  std::string detail;

  friend auto operator<=>(const Mismatch&, const Mismatch&) = default;
};

struct VerifyReport {
  std::size_t pairs_tested = 0;
  std::size_t matches = 0;
  std::vector<Mismatch> mismatches;  // canonically sorted
  std::size_t states = 0;

  [[nodiscard]] double score() const {
    return pairs_tested == 0 ? 100.0 : 100.0 * static_cast<double>(matches) / static_cast<double>(pairs_tested);
  }
  [[nodiscard]] bool perfect() const { return matches == pairs_tested; }
};

/// FNV-1a over the sorted atom strings.
[[nodiscard]] std::uint64_t state_digest(const State& s, std::span<const PredicateSig> preds,
                                         const ObjectTable& objects);

/// Seeded random walks from the initial state under `hidden`. Each walk
/// restarts from the initial state after `walk_length` steps or at a dead end.
[[nodiscard]] std::vector<State> sample_states(const Problem& problem, const Domain& hidden, std::size_t count,
                                               std::size_t walk_length, std::uint64_t seed);

/// Hidden and learned domains compiled for one verification instance.
class Comparator {
 public:
  Comparator(const Problem& problem, const Domain& hidden, const Domain& learned);

  /// Compares one ground action on one hidden (full) state.
  [[nodiscard]] std::optional<Mismatch> compare(const State& hidden_state, const GroundAction& a) const;

  /// Every ground action of every hidden schema over typed, injective tuples.
  [[nodiscard]] std::pair<std::size_t, std::vector<Mismatch>> compare_on_state(const State& hidden_state) const;

  /// Groundings of `action` applicable in either domain (a fault in the
  /// learned domain counts as applicable), canonically sorted.
  [[nodiscard]] std::vector<GroundAction> interesting_groundings(const State& hidden_state,
                                                                 const std::string& action) const;

  [[nodiscard]] const CompiledDomain& hidden() const noexcept { return hidden_; }
  [[nodiscard]] const CompiledDomain& learned() const noexcept { return learned_; }
  [[nodiscard]] std::string render(const GroundAction& a) const;

 private:
  const Problem* problem_;
  CompiledDomain hidden_;
  CompiledDomain learned_;
  PredicateMap to_learned_;
};

struct VerifyOptions {
  std::size_t pairs = 1000;
  std::uint64_t seed = 1;
  std::size_t walk_length = 50;
};

/// Pairs are split evenly over the hidden action names (remainder to the
/// earliest names). For each sampled state and action name one grounding is
/// drawn from those applicable in either domain, or a random typed grounding
/// when there are none.
[[nodiscard]] VerifyReport verify_equivalence(const Problem& problem, const Domain& hidden, const Domain& learned,
                                              const VerifyOptions& options);

[[nodiscard]] std::string render_verify_report(const VerifyReport& report);

/// Argument-free comparison against an original STRIPS domain: for each
/// sampled state and action name, the sets of successor states must agree
/// on the learned predicates. Informational only.
[[nodiscard]] VerifyReport compare_successor_sets(const Problem& problem, const Domain& strips, const Domain& learned,
                                                  std::size_t states, std::uint64_t seed,
                                                  std::size_t walk_length = 50);

}  // namespace stripsplus
