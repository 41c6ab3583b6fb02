#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqcalc/calculus.hpp"
#include "eqcalc/derivation.hpp"

namespace eqc {

struct SearchBounds {
  std::size_t max_height = 8;
  std::size_t max_term_depth = 3;
};

// Term universe: every signature term up to the depth bound plus the goal's
// subterms. Equality-rule terms r, s are drawn from it.
std::vector<Term> term_universe(const Sequent& goal, const Signature& sig, std::size_t max_term_depth);
// Cut formulas: all equalities over the term universe plus the goal's
// predicate atoms.
std::vector<Atom> formula_universe(const Sequent& goal, const Signature& sig, std::size_t max_term_depth);

enum class Precheck { Auto, On, Off };

struct SearchOptions {
  // Refutation pass over antecedent multisets, with exchange for free. A
  // failure there is a failure of the exact search. Auto turns it on when
  // the calculus has a cut or contraction.
  Precheck relaxed = Precheck::Auto;
  // Iterative deepening yields a derivation of least height. Without it the
  // search runs once at max_height; the verdict is the same.
  bool shortest = true;
};

struct SearchStats {
  std::size_t states = 0;
  std::size_t expansions = 0;
  bool refuted_by_precheck = false;
};

struct SearchOutcome {
  std::optional<Derivation> derivation;
  SearchBounds bounds;
  SearchStats stats;

  bool found() const { return derivation.has_value(); }
};

// Backward search with iterative deepening. Subgoals the congruence oracle
// rejects are pruned, which loses nothing since every rule is sound. A
// NotFound verdict covers every derivation of height at most max_height
// whose cut formulas, weakened atoms and equality-rule terms come from the
// universes above.
//
// A Prover keeps its memo across goals over the same signature.
class Prover {
 public:
  Prover(const Calculus& calc, const SearchBounds& bounds, const Signature& sig, const SearchOptions& opts = {});
  ~Prover();
  Prover(Prover&&) noexcept;
  Prover& operator=(Prover&&) noexcept;

  SearchOutcome prove(const Sequent& goal);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SearchOutcome bounded_search(const Sequent& goal, const Calculus& calc, const SearchBounds& bounds,
                             const Signature& sig, const SearchOptions& opts = {});

// `NOT FOUND within bounds h=8 d=4`
std::string not_found_message(const SearchBounds& bounds);

}  // namespace eqc
