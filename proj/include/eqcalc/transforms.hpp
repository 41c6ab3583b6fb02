#pragma once

#include <vector>

#include "eqcalc/calculus.hpp"
#include "eqcalc/derivation.hpp"

namespace eqc {

struct Certificate {
  Calculus source;
  Calculus target;
  // The end-sequent is exactly the one the transform promises.
  bool end_sequent_preserved = false;
};

struct TransformOutcome {
  Derivation result;
  Certificate certificate;
};

// Structural plumbing. Both build only weakening and exchange nodes.
//
// rearrange: d proves G => H, every atom of G occurs in target at least as
// often; weakens the missing atoms at the right end, then bubble-sorts into
// target order by adjacent exchanges. Duplicates keep their relative order.
Derivation rearrange(Derivation d, const Antecedent& target);
Derivation weaken(Derivation d, const Atom& introduced);
Derivation exchange(Derivation d, std::size_t index);

// Equality rules as derived rules. Fragments take their open premises as
// derivations; the new nodes are checked as they are built.
//
// premise proves G => tpl{r}. Concludes G,r=s => tpl{s} (kind 1) or
// G,s=r => tpl{s} (kind 2) using only cng, axioms and refl.
Derivation eqleft_as_cng(int kind, const Template& tpl, const Term& r, const Term& s, Derivation premise);

// left proves G => tpl{r}, right proves L => r=s. Concludes G,L => tpl{s}
// with one eq-left-1 and one cut on r=s, then exchanges.
Derivation cng_as_eqm(const Template& tpl, const Term& r, const Term& s, Derivation left, Derivation right);

// Whole-proof translation between EQ_M and EQ. target.eq_mechanism must be
// EqLeftPair or Cng; the source is target with the other mechanism.
TransformOutcome translate(const Derivation& d, const Calculus& target);

// G => r=s to G= => r=s, every atom an equality. calc is EQ_M or EQ_M-.
TransformOutcome project_equalities(const Derivation& d, const Calculus& calc);

Antecedent filter_last(const Antecedent& gamma, const Atom& f);
Antecedent equalities_only(const Antecedent& gamma);

// In ccf.EQ': G => H to G_F => H.
TransformOutcome keep_last(const Derivation& d, const Atom& f);
// In ccf.EQ': G,F,F => H to G,F => H.
TransformOutcome admit_contraction(const Derivation& d);
// In ccf.EQ': G => H to G0 => H when every atom of G occurs in G0.
TransformOutcome saturate(const Derivation& d, const Antecedent& gamma0);
// cf.EQ' to ccf.EQ'.
TransformOutcome eliminate_contractions(const Derivation& d);

// d1 proves G,F,F => H in calc (context-sharing cut). Concludes G,F => H by a
// shared cut against the axiom F => F weakened and exchanged to G,F => F.
TransformOutcome contraction_via_shared_cut(const Derivation& d1, const Calculus& calc);
// Replaces every contraction node that way.
TransformOutcome contractions_to_shared_cuts(const Derivation& d, const Calculus& calc);

}  // namespace eqc
