#pragma once

#include <string_view>

#include "eqcalc/term.hpp"

namespace eqc {

// Infix concrete syntax:
//   term    := IDENT | IDENT "(" term ("," term)* ")"
//   atom    := term "=" term | IDENT "(" term ("," term)* ")" | IDENT
//   sequent := [atom ("," atom)*] "=>" atom
// Errors carry the byte offset of the offending token.
Term parse_term(std::string_view text, const Signature& sig);
Atom parse_atom(std::string_view text, const Signature& sig);
Sequent parse_sequent(std::string_view text, const Signature& sig);

// Reads a `.sig` file: `fun NAME ARITY` and `pred NAME ARITY` lines, `#` comments.
Signature parse_signature(std::string_view text);

// Builds the smallest signature under which `text` parses as a sequent:
// identifiers in predicate position become predicates, everything else functions.
Signature infer_signature(std::string_view sequent_text);

}  // namespace eqc
