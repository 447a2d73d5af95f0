#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stripsplus/model.hpp"
#include "stripsplus/synth.hpp"
#include "stripsplus/translate.hpp"
#include "stripsplus/verify.hpp"

namespace stripsplus {

/// One end-to-end run: translate a STRIPS domain into the hidden STRIPS+
/// domain, record a trace from it, learn, then verify on a second instance.
struct PipelineConfig {
  std::string label;
  Domain strips;
  Problem train;
  Problem verify;
  std::size_t length = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> dropped;
  std::size_t pairs = 1000;
  LearnOptions learn;
  std::size_t walk_length = 50;
};

/// Columns in output order.
struct TableRow {
  std::string label;
  std::size_t objects = 0;         // #O
  std::size_t length = 0;          // #L
  std::size_t strips_arity = 0;    // |x'|
  std::size_t explicit_arity = 0;  // |x|
  std::size_t learned_total = 0;   // |x|+|z|
  std::size_t learned_z = 0;       // |z|
  std::size_t missed = 0;          // |x'\z|
  std::size_t extra = 0;           // |z\x'|
  double learn_seconds = 0.0;      // T
  std::size_t verify_objects = 0;  // #O_V
  std::size_t verify_pairs = 0;    // #S_V
  double verify_seconds = 0.0;     // T_V
  double score = 0.0;              // %V

  [[nodiscard]] static std::string tsv_header();
  [[nodiscard]] std::string tsv() const;
  [[nodiscard]] std::string key_values() const;
};

struct PipelineResult {
  TranslationResult translation;
  Trace trace;
  LearnResult learned;
  VerifyReport verify;
  TableRow row;
};

/// Learned implicit variables compared against the original arguments on the
/// training occurrences. An original argument is recovered when some learned
/// z takes its value at every occurrence; a z is extra when it matches no
/// original argument.
struct RecoveryCount {
  std::size_t missed = 0;
  std::size_t extra = 0;
};
[[nodiscard]] RecoveryCount count_recovery(const Problem& train, const TranslationResult& translation,
                                           const std::vector<State>& full_states, const Trace& trace,
                                           const Domain& learned);

[[nodiscard]] PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace stripsplus
