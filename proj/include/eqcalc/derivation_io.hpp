#pragma once

#include <string>
#include <string_view>

#include "eqcalc/derivation.hpp"
#include "eqcalc/term.hpp"

namespace eqc {

// Derivation files (.eqd) hold one s-expression per node:
//
//   (RULE PARAM* PREMISE* (seq ATOM* => ATOM))
//
// Params are tagged lists: (term T) for refl, (atom A) for weaken/cut/cut-shared,
// (index I) for exchange, (split K) for cut/cng, and (tpl D) (r T) (s T) for the
// equality rules, with `_` marking holes in D. Terms and atoms are prefix:
// `(f a)`, `(= a (f a))`, `(P a)`. The refl term is omitted when it is the left
// side of the conclusion.
//
// Canonical layout: a leaf is one line; an inner node opens on one line, lists
// its premises indented by two spaces, and closes with its `(seq ...)` line.
Derivation parse_derivation(std::string_view text, const Signature& sig);
std::string serialize_derivation(const Derivation& d);

// The smallest signature a derivation file uses, read off its atoms and
// terms. Conflicting arities are a SignatureError.
Signature infer_derivation_signature(std::string_view text);

// Sequent in s-expression form, `(seq (= a (f a)) => (= a (f (f a))))`.
Sequent parse_sexpr_sequent(std::string_view text, const Signature& sig);

}  // namespace eqc
