#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stripsplus/model.hpp"

namespace stripsplus {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

/// S-expression node. Atoms are lowercased at read time; `;` starts a comment.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int col = 0;

  [[nodiscard]] bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  [[nodiscard]] bool head_is(std::string_view s) const {
    return is_list && !items.empty() && items.front().is_atom(s);
  }
  [[nodiscard]] ParseError error(const std::string& msg) const { return ParseError(msg, line, col); }
};

[[nodiscard]] SExpr read_sexpr(std::string_view text);

}  // namespace stripsplus
