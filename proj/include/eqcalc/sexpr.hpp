#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eqc {

// Minimal s-expression tree. Symbols are maximal runs of characters other
// than whitespace, parentheses and `;` (which starts a line comment).
struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  std::size_t offset = 0;

  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  // `(head ...)` with a symbol head.
  bool has_head(std::string_view s) const { return is_list && !items.empty() && items[0].is_symbol(s); }
};

// Reads every top-level expression in the text.
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace eqc
