#include "eqcalc/sexpr.hpp"

#include <cctype>

#include "eqcalc/error.hpp"

namespace eqc {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) throw Error(ErrorKind::SyntaxError, "unexpected end of input", pos_);
    SExpr e;
    e.offset = pos_;
    char c = text_[pos_];
    if (c == ')') throw Error(ErrorKind::SyntaxError, "unbalanced ')'", pos_);
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw Error(ErrorKind::SyntaxError, "unclosed '('", e.offset);
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      ++pos_;
    }
    e.symbol = std::string(text_.substr(start, pos_ - start));
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

}  // namespace eqc
