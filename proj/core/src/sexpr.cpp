#include "stripsplus/sexpr.hpp"

#include <cctype>

namespace stripsplus {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  SExpr read_top() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip();
    if (pos_ < text_.size()) throw ParseError("trailing input after top-level expression", line_, col_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", e.line, e.col);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

SExpr read_sexpr(std::string_view text) { return Reader(text).read_top(); }

}  // namespace stripsplus
