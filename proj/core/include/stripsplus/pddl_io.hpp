#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "stripsplus/model.hpp"
#include "stripsplus/sexpr.hpp"

namespace stripsplus {

/// Unsupported PDDL construct; the message names the feature.
class UnsupportedFeature : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Typed positive STRIPS. Untyped files get the single type `object`.
[[nodiscard]] Domain parse_domain(std::string_view text);
[[nodiscard]] Problem parse_problem(std::string_view text, const Domain& domain);

/// Native STRIPS+ dialect (requirement `:implicit-arguments`). Also accepts
/// plain STRIPS files, which come back as STRIPS+ domains with empty
/// binding queries.
[[nodiscard]] Domain parse_stripsplus_domain(std::string_view text);

enum class DomainStyle { Native, Flattened };

/// Native output lists each stratum in an `:implicit` block. The flattened
/// view pushes implicit and positive free variables into the parameter list
/// and writes negative free atoms as `forall`; it is for inspection only.
[[nodiscard]] std::string write_stripsplus_domain(const Domain& domain, DomainStyle style = DomainStyle::Native);

[[nodiscard]] std::string write_trace_text(const Trace& trace);
[[nodiscard]] Trace read_trace_text(std::string_view text);

void write_trace(const Trace& trace, const std::filesystem::path& path);
[[nodiscard]] Trace read_trace(const std::filesystem::path& path);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

inline constexpr int kTraceVersion = 1;

}  // namespace stripsplus
