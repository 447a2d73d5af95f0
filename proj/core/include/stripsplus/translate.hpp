#pragma once

#include <span>
#include <string>
#include <vector>

#include "stripsplus/engine.hpp"
#include "stripsplus/model.hpp"

namespace stripsplus {

struct Demotion {
  std::size_t param = 0;  // 0-based index into the original parameter list
  Subquery stratum;       // over the translated variables
};

struct SchemaTranslation {
  std::string action;
  std::vector<std::size_t> kept;  // original indexes, declaration order
  std::vector<Demotion> moved;    // stratified order
  bool observed = true;
  std::size_t occurrences = 0;
};

/// STRIPS traces (full arguments) prepared against the original domain.
class TranslationData {
 public:
  TranslationData(const Domain& strips, std::span<const Trace> traces);
  [[nodiscard]] std::span<const Trace> traces() const noexcept { return traces_; }
  [[nodiscard]] const IndexedTrace& indexed(std::size_t i) const { return *indexed_[i]; }

 private:
  std::span<const Trace> traces_;
  std::vector<std::unique_ptr<IndexedTrace>> indexed_;
};

/// Greedy maximal demotion. Parameters are tried from the last declared to
/// the first; a candidate set is accepted if its members can be ordered so
/// that each one is unique at every occurrence given the kept parameters and
/// the ones ordered before it, using only the schema's own preconditions.
[[nodiscard]] SchemaTranslation detect_determined_args(const ActionSchema& schema, const OccurrenceSet& occ,
                                                       const TranslationData& data);

/// Rewrites one schema according to a detection result.
[[nodiscard]] ActionSchema apply_translation(const ActionSchema& schema, const SchemaTranslation& tr);

struct TranslationResult {
  Domain domain;
  std::vector<SchemaTranslation> report;
  std::vector<std::string> warnings;
};

[[nodiscard]] TranslationResult translate_domain(const Domain& strips, std::span<const Trace> traces);

/// Human-readable report mapping each demoted parameter to its stratum.
[[nodiscard]] std::string render_translation_report(const Domain& strips, const TranslationResult& result);

/// Projects a full-argument STRIPS trace onto the kept arguments.
[[nodiscard]] Trace project_trace(const Trace& trace, const TranslationResult& result);

}  // namespace stripsplus
