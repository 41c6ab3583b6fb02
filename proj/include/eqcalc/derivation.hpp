#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "eqcalc/template.hpp"
#include "eqcalc/term.hpp"

namespace eqc {

// Fully parameterized rule applications. Each carries every witness the
// checker needs, so checking never searches.
namespace rule {

// A => A
struct Axiom {
  friend bool operator==(const Axiom&, const Axiom&) = default;
};
// => t=t
struct Refl {
  Term term;
  friend bool operator==(const Refl&, const Refl&) = default;
};
// G, => H from G => H; the new atom is appended at the right end.
struct Weaken {
  Atom introduced;
  friend bool operator==(const Weaken&, const Weaken&) = default;
};
// Swaps antecedent positions index and index+1.
struct Exchange {
  std::size_t index = 0;
  friend bool operator==(const Exchange&, const Exchange&) = default;
};
// G,F => H from G,F,F => H.
struct Contract {
  friend bool operator==(const Contract&, const Contract&) = default;
};
// G,L => H from G => A and L,A => H; split = |G|.
struct Cut {
  Atom formula;
  std::size_t split = 0;
  friend bool operator==(const Cut&, const Cut&) = default;
};
// G => H from G => A and G,A => H.
struct CutShared {
  Atom formula;
  friend bool operator==(const CutShared&, const CutShared&) = default;
};
// G,r=s => D{s} from G => D{r}.
struct EqLeft1 {
  Template tpl;
  Term r, s;
  friend bool operator==(const EqLeft1&, const EqLeft1&) = default;
};
// G,s=r => D{s} from G => D{r}.
struct EqLeft2 {
  Template tpl;
  Term r, s;
  friend bool operator==(const EqLeft2&, const EqLeft2&) = default;
};
// G,L => D{s} from G => D{r} and L => r=s; split = |G|.
struct Cng {
  Template tpl;
  Term r, s;
  std::size_t split = 0;
  friend bool operator==(const Cng&, const Cng&) = default;
};
// G => D{s} from G => D{r} and G => r=s.
struct CngShared {
  Template tpl;
  Term r, s;
  friend bool operator==(const CngShared&, const CngShared&) = default;
};

}  // namespace rule

using RuleApp = std::variant<rule::Axiom, rule::Refl, rule::Weaken, rule::Exchange, rule::Contract,
                             rule::Cut, rule::CutShared, rule::EqLeft1, rule::EqLeft2, rule::Cng,
                             rule::CngShared>;

enum class RuleKind { Axiom, Refl, Weaken, Exchange, Contract, Cut, CutShared, EqLeft1, EqLeft2, Cng, CngShared };

inline RuleKind kind_of(const RuleApp& r) { return static_cast<RuleKind>(r.index()); }
// File-format name: axiom, refl, weaken, exchange, contract, cut, cut-shared, eq-left-1, ...
std::string_view rule_name(RuleKind k);
std::size_t rule_arity(RuleKind k);

struct Derivation {
  Sequent conclusion;
  RuleApp rule;
  std::vector<Derivation> premises;

  Derivation() = default;
  Derivation(Sequent c, RuleApp r, std::vector<Derivation> p = {})
      : conclusion(std::move(c)), rule(std::move(r)), premises(std::move(p)) {}

  RuleKind kind() const { return kind_of(rule); }
};

bool operator==(const Derivation& a, const Derivation& b);

struct DerivationStats {
  std::size_t height = 0;  // edges on the longest root-to-leaf branch
  std::size_t node_count = 0;
  std::size_t contraction_count = 0;
  std::size_t cut_count = 0;  // cut and cut-shared nodes
  std::size_t weakening_count = 0;

  friend bool operator==(const DerivationStats&, const DerivationStats&) = default;
};

DerivationStats stats(const Derivation& d);

// Visits every node, premises before conclusions.
template <typename F>
void for_each_node(const Derivation& d, F&& f) {
  for (const auto& p : d.premises) for_each_node(p, f);
  f(d);
}

}  // namespace eqc
