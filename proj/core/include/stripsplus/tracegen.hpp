#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stripsplus/engine.hpp"
#include "stripsplus/model.hpp"

namespace stripsplus {

/// Random walk from the initial state, choosing uniformly among the
/// applicable ground actions at each step. Stored states omit the dropped
/// predicates; simulation always uses full states. A dead end ends the trace
/// early and sets `dead_end`.
[[nodiscard]] Trace generate_trace(const Problem& problem, const Domain& domain, std::size_t length,
                                   std::uint64_t seed, std::span<const std::string> dropped = {});

/// Same walk but also returns the full (unprojected) states, in domain
/// predicate ids. Used by tooling that needs hidden ground truth.
struct FullWalk {
  Trace trace;
  std::vector<State> full_states;  // init first
};
[[nodiscard]] FullWalk generate_walk(const Problem& problem, const Domain& domain, std::size_t length,
                                     std::uint64_t seed, std::span<const std::string> dropped = {});

/// Ground actions applicable in `s`, canonically ordered.
[[nodiscard]] std::vector<GroundAction> enumerate_applicable(const Domain& domain, const ObjectTable& objects,
                                                             const State& s);

}  // namespace stripsplus
