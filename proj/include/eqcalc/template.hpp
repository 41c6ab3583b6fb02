#pragma once

#include <compare>
#include <string>
#include <vector>

#include "eqcalc/term.hpp"

namespace eqc {

// A term shape in which the hole `_` may stand at any position.
struct Pattern {
  static constexpr const char* kHole = "_";

  std::string head;
  std::vector<Pattern> args;

  static Pattern hole() { return Pattern{kHole, {}}; }
  static Pattern from_term(const Term& t);

  bool is_hole() const { return head == kHole; }
};

bool operator==(const Pattern& a, const Pattern& b);
std::strong_ordering operator<=>(const Pattern& a, const Pattern& b);

// Position of a subterm: the atom argument index followed by argument indices.
using Path = std::vector<std::size_t>;

// An atom with zero or more holes: D with the distinguished variable v.
struct Template {
  Atom::Kind kind = Atom::Kind::Equality;
  std::string name;  // predicate symbol; empty for equalities
  std::vector<Pattern> args;

  static Template from_atom(const Atom& a);

  bool is_equality() const { return kind == Atom::Kind::Equality; }
  std::vector<Path> hole_paths() const;
  std::size_t hole_count() const { return hole_paths().size(); }
};

bool operator==(const Template& a, const Template& b);
std::strong_ordering operator<=>(const Template& a, const Template& b);

// D{v/t}: every hole becomes t.
Atom apply_template(const Template& tpl, const Term& t);

// All templates D with D{v/r} = premise and D{v/s} = conclusion, sorted.
// Empty when no equality-rule instance relates the two atoms.
std::vector<Template> match_replacement(const Atom& premise, const Atom& conclusion,
                                        const Term& r, const Term& s);

// Positions of t inside a's arguments, in left-to-right preorder. Occurrences
// of one term never nest.
std::vector<Path> occurrences(const Atom& a, const Term& t);
// The template of a with holes at the given positions.
Template punch_holes(const Atom& a, const std::vector<Path>& holes);

// `(= a (f _))` style rendering; holes print as `_`.
std::string to_sexpr(const Pattern& p);
std::string to_sexpr(const Template& tpl);
std::string to_string(const Template& tpl);

}  // namespace eqc
