#include "eqcalc/transforms.hpp"

#include <algorithm>
#include <map>

#include "eqcalc/error.hpp"
#include "eqcalc/kernel.hpp"

namespace eqc {

namespace {

// Permits every rule; nodes built here are checked against their figure only.
Calculus any_calculus(EqMechanism m, CutMode cut) {
  Calculus c;
  c.eq_mechanism = m;
  c.cut = cut;
  return c;
}

// Builds one node and checks it immediately.
Derivation node(Sequent conclusion, RuleApp rule, std::vector<Derivation> premises, const Calculus& calc) {
  std::vector<Sequent> ps;
  ps.reserve(premises.size());
  for (const auto& p : premises) ps.push_back(p.conclusion);
  if (auto v = check_rule(conclusion, rule, ps, calc)) {
    throw Error(ErrorKind::InternalError,
                std::string("built an invalid ") + std::string(rule_name(kind_of(rule))) + " node: " + v->message);
  }
  return Derivation(std::move(conclusion), std::move(rule), std::move(premises));
}

Derivation node(Sequent conclusion, RuleApp rule, std::vector<Derivation> premises) {
  return node(std::move(conclusion), std::move(rule), std::move(premises),
              any_calculus(kind_of(rule) == RuleKind::Cng         ? EqMechanism::Cng
                           : kind_of(rule) == RuleKind::CngShared ? EqMechanism::CngShared
                                                                  : EqMechanism::EqLeftPair,
                           kind_of(rule) == RuleKind::CutShared ? CutMode::ContextSharing
                                                                : CutMode::IndependentAtomic));
}

Derivation axiom(const Atom& a) { return Derivation(Sequent{{a}, a}, rule::Axiom{}); }

Derivation refl(const Term& t) { return Derivation(Sequent{{}, Atom::equality(t, t)}, rule::Refl{t}); }

void require_checks(const Derivation& d, const Calculus& calc) {
  CheckReport r = check_derivation(d, calc);
  if (!r.ok) {
    const Violation& v = r.violations.front();
    throw Error(ErrorKind::SourceDoesNotCheck,
                "input does not check in " + calc.name() + " at " + to_string(v.path) + ": " + v.message);
  }
}

TransformOutcome finish(Derivation result, const Calculus& source, const Calculus& target, const Sequent& expected) {
  CheckReport r = check_derivation(result, target);
  if (!r.ok) {
    throw Error(ErrorKind::InternalError, "transform output does not check in " + target.name() + " at " +
                                              to_string(r.violations.front().path) + ": " +
                                              r.violations.front().message);
  }
  bool preserved = result.conclusion == expected;
  if (!preserved) throw Error(ErrorKind::InternalError, "transform output has the wrong end-sequent");
  return TransformOutcome{std::move(result), Certificate{source, target, preserved}};
}

std::size_t last_index_of(const Antecedent& gamma, const Atom& f) {
  for (std::size_t i = gamma.size(); i-- > 0;)
    if (gamma[i] == f) return i;
  return gamma.size();
}

bool occurs(const Antecedent& gamma, const Atom& f) { return std::find(gamma.begin(), gamma.end(), f) != gamma.end(); }

}  // namespace

Derivation weaken(Derivation d, const Atom& introduced) {
  Sequent c = d.conclusion;
  c.antecedent.push_back(introduced);
  return node(std::move(c), rule::Weaken{introduced}, {std::move(d)});
}

Derivation exchange(Derivation d, std::size_t index) {
  Sequent c = d.conclusion;
  std::swap(c.antecedent.at(index), c.antecedent.at(index + 1));
  return node(std::move(c), rule::Exchange{index}, {std::move(d)});
}

Derivation rearrange(Derivation d, const Antecedent& target) {
  // Missing atoms, in target order.
  std::map<Atom, int> have;
  for (const auto& a : d.conclusion.antecedent) ++have[a];
  for (const auto& a : target) {
    if (have[a] > 0) {
      --have[a];
    } else {
      d = weaken(std::move(d), a);
    }
  }
  for (const auto& [a, n] : have)
    if (n > 0)
      throw Error(ErrorKind::PreconditionViolated, "cannot rearrange: " + to_string(a) + " is not in the target");

  // Stable assignment of each current position to a target position.
  std::map<Atom, std::vector<std::size_t>> slots;
  for (std::size_t i = target.size(); i-- > 0;) slots[target[i]].push_back(i);
  std::vector<std::size_t> rank;
  for (const auto& a : d.conclusion.antecedent) {
    auto& v = slots[a];
    rank.push_back(v.back());
    v.pop_back();
  }
  for (std::size_t pass = 0; pass < rank.size(); ++pass) {
    bool swapped = false;
    for (std::size_t i = 0; i + 1 < rank.size(); ++i) {
      if (rank[i] > rank[i + 1]) {
        std::swap(rank[i], rank[i + 1]);
        d = exchange(std::move(d), i);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  return d;
}

Derivation eqleft_as_cng(int kind, const Template& tpl, const Term& r, const Term& s, Derivation premise) {
  if (kind != 1 && kind != 2) throw Error(ErrorKind::PreconditionViolated, "eq-left kind must be 1 or 2");
  Atom rs = Atom::equality(r, s);
  Derivation right = axiom(rs);
  if (kind == 2) {
    // s=r => r=s from => s=s and s=r => s=r, replacing the left s.
    Atom sr = Atom::equality(s, r);
    Template flip{Atom::Kind::Equality, "", {Pattern::hole(), Pattern::from_term(s)}};
    right = node(Sequent{{sr}, rs}, rule::Cng{flip, s, r, 0}, {refl(s), axiom(sr)});
  }
  Sequent c = premise.conclusion;
  std::size_t split = c.antecedent.size();
  c.antecedent.push_back(right.conclusion.antecedent.front());
  c.succedent = apply_template(tpl, s);
  return node(std::move(c), rule::Cng{tpl, r, s, split}, {std::move(premise), std::move(right)});
}

Derivation cng_as_eqm(const Template& tpl, const Term& r, const Term& s, Derivation left, Derivation right) {
  Atom rs = Atom::equality(r, s);
  Antecedent gamma = left.conclusion.antecedent;
  Antecedent lambda = right.conclusion.antecedent;

  Sequent e = left.conclusion;
  e.antecedent.push_back(rs);
  e.succedent = apply_template(tpl, s);
  Derivation eq = node(e, rule::EqLeft1{tpl, r, s}, {std::move(left)});

  // The cut puts the r=s side first: L,G => tpl{s}.
  Sequent c{lambda, e.succedent};
  c.antecedent.insert(c.antecedent.end(), gamma.begin(), gamma.end());
  Derivation cut = node(std::move(c), rule::Cut{rs, lambda.size()}, {std::move(right), std::move(eq)});

  Antecedent target = gamma;
  target.insert(target.end(), lambda.begin(), lambda.end());
  return rearrange(std::move(cut), target);
}

namespace {

Derivation translate_node(const Derivation& d) {
  std::vector<Derivation> ps;
  for (const auto& p : d.premises) ps.push_back(translate_node(p));
  return std::visit(
      [&](const auto& r) -> Derivation {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, rule::EqLeft1>) {
          return eqleft_as_cng(1, r.tpl, r.r, r.s, std::move(ps[0]));
        } else if constexpr (std::is_same_v<R, rule::EqLeft2>) {
          return eqleft_as_cng(2, r.tpl, r.r, r.s, std::move(ps[0]));
        } else if constexpr (std::is_same_v<R, rule::Cng>) {
          return cng_as_eqm(r.tpl, r.r, r.s, std::move(ps[0]), std::move(ps[1]));
        } else {
          return Derivation(d.conclusion, d.rule, std::move(ps));
        }
      },
      d.rule);
}

}  // namespace

TransformOutcome translate(const Derivation& d, const Calculus& target) {
  Calculus source = target;
  if (target.eq_mechanism == EqMechanism::Cng) {
    source.eq_mechanism = EqMechanism::EqLeftPair;
  } else if (target.eq_mechanism == EqMechanism::EqLeftPair) {
    source.eq_mechanism = EqMechanism::Cng;
    // Cng nodes become cuts.
    if (target.cut != CutMode::IndependentAtomic)
      throw Error(ErrorKind::PreconditionViolated, "translation into EQ_M needs the independent cut");
  } else {
    throw Error(ErrorKind::PreconditionViolated, "translate targets EQ or EQ_M");
  }
  require_checks(d, source);
  return finish(translate_node(d), source, target, d.conclusion);
}

Antecedent equalities_only(const Antecedent& gamma) {
  Antecedent out;
  for (const auto& a : gamma)
    if (a.is_equality()) out.push_back(a);
  return out;
}

namespace {

std::size_t count_equalities(const Antecedent& gamma, std::size_t end) {
  return static_cast<std::size_t>(
      std::count_if(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(end),
                    [](const Atom& a) { return a.is_equality(); }));
}

Derivation project(const Derivation& d) {
  const Antecedent& gamma = d.conclusion.antecedent;
  switch (d.kind()) {
    case RuleKind::Axiom:
    case RuleKind::Refl: return d;
    case RuleKind::Weaken: {
      const Atom& g = std::get<rule::Weaken>(d.rule).introduced;
      Derivation p = project(d.premises[0]);
      return g.is_equality() ? weaken(std::move(p), g) : p;
    }
    case RuleKind::Exchange: {
      std::size_t i = std::get<rule::Exchange>(d.rule).index;
      Derivation p = project(d.premises[0]);
      if (!gamma[i].is_equality() || !gamma[i + 1].is_equality()) return p;
      return exchange(std::move(p), count_equalities(gamma, i));
    }
    case RuleKind::Contract: {
      Derivation p = project(d.premises[0]);
      if (!gamma.back().is_equality()) return p;
      Sequent c{equalities_only(gamma), d.conclusion.succedent};
      return node(std::move(c), rule::Contract{}, {std::move(p)});
    }
    case RuleKind::EqLeft1:
    case RuleKind::EqLeft2: {
      Derivation p = project(d.premises[0]);
      Sequent c{equalities_only(gamma), d.conclusion.succedent};
      return node(std::move(c), d.rule, {std::move(p)});
    }
    case RuleKind::Cut: {
      const auto& cut = std::get<rule::Cut>(d.rule);
      Antecedent g0(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(cut.split));
      Antecedent g0_eq = equalities_only(g0);
      Derivation right = project(d.premises[1]);
      if (!cut.formula.is_equality()) {
        // Bypass the cut: L= => H, then weakenings and exchanges to G=,L=.
        return rearrange(std::move(right), equalities_only(gamma));
      }
      Derivation left = project(d.premises[0]);
      Sequent c{equalities_only(gamma), d.conclusion.succedent};
      return node(std::move(c), rule::Cut{cut.formula, g0_eq.size()}, {std::move(left), std::move(right)});
    }
    default: throw Error(ErrorKind::SourceDoesNotCheck, "projection handles EQ_M derivations only");
  }
}

Derivation keep_last_node(const Derivation& d, const Atom& f) {
  const Antecedent& gamma = d.conclusion.antecedent;
  if (!occurs(gamma, f)) return d;
  switch (d.kind()) {
    case RuleKind::Axiom: return d;
    case RuleKind::Weaken: {
      const Atom& g = std::get<rule::Weaken>(d.rule).introduced;
      const Antecedent& prem = d.premises[0].conclusion.antecedent;
      if (g != f) return weaken(keep_last_node(d.premises[0], f), g);
      if (!occurs(prem, f)) return d;
      // Bring the surviving F to the end.
      Derivation p = keep_last_node(d.premises[0], f);
      std::size_t at = last_index_of(p.conclusion.antecedent, f);
      for (std::size_t i = at; i + 1 < p.conclusion.antecedent.size(); ++i) p = exchange(std::move(p), i);
      return p;
    }
    case RuleKind::Exchange: {
      std::size_t i = std::get<rule::Exchange>(d.rule).index;
      const Antecedent& prem = d.premises[0].conclusion.antecedent;
      std::size_t last = last_index_of(prem, f);
      Derivation p = keep_last_node(d.premises[0], f);
      bool swallowed = (prem[i] == f && i != last) || (prem[i + 1] == f && i + 1 != last);
      if (swallowed) return p;
      std::size_t dropped = 0;
      for (std::size_t k = 0; k < i; ++k) dropped += (prem[k] == f && k != last);
      return exchange(std::move(p), i - dropped);
    }
    case RuleKind::CngShared: {
      Derivation l = keep_last_node(d.premises[0], f);
      Derivation r = keep_last_node(d.premises[1], f);
      Sequent c{filter_last(gamma, f), d.conclusion.succedent};
      return node(std::move(c), d.rule, {std::move(l), std::move(r)});
    }
    default: throw Error(ErrorKind::SourceDoesNotCheck, "rule outside ccf.EQ'");
  }
}

Derivation admit(const Derivation& d) {
  const Antecedent& gamma = d.conclusion.antecedent;
  Atom f = gamma.back();
  Derivation squeezed = keep_last_node(d, f);
  Antecedent target(gamma.begin(), gamma.end() - 1);
  return rearrange(std::move(squeezed), target);
}

Derivation eliminate_node(const Derivation& d) {
  std::vector<Derivation> ps;
  for (const auto& p : d.premises) ps.push_back(eliminate_node(p));
  if (d.kind() == RuleKind::Contract) return admit(ps[0]);
  return Derivation(d.conclusion, d.rule, std::move(ps));
}

Derivation via_shared_cut(Derivation d1) {
  const Antecedent& gff = d1.conclusion.antecedent;
  Atom f = gff.back();
  Antecedent gf(gff.begin(), gff.end() - 1);
  Derivation left = rearrange(axiom(f), gf);
  Sequent c{gf, d1.conclusion.succedent};
  return node(std::move(c), rule::CutShared{f}, {std::move(left), std::move(d1)});
}

Derivation shared_cut_node(const Derivation& d) {
  std::vector<Derivation> ps;
  for (const auto& p : d.premises) ps.push_back(shared_cut_node(p));
  if (d.kind() == RuleKind::Contract) return via_shared_cut(std::move(ps[0]));
  return Derivation(d.conclusion, d.rule, std::move(ps));
}

void require_doubled(const Sequent& s) {
  const Antecedent& g = s.antecedent;
  if (g.size() < 2 || g[g.size() - 1] != g[g.size() - 2])
    throw Error(ErrorKind::ShapeMismatch, "the last two antecedent atoms must be identical");
}

}  // namespace

TransformOutcome project_equalities(const Derivation& d, const Calculus& calc) {
  if (!(calc == Calculus::eqm() || calc == Calculus::eqm_minus()))
    throw Error(ErrorKind::PreconditionViolated, "projection is defined for EQ_M and EQ_M- only");
  require_checks(d, calc);
  if (!d.conclusion.succedent.is_equality())
    throw Error(ErrorKind::SuccedentNotEquality, "succedent " + to_string(d.conclusion.succedent) + " is not an equality");
  Sequent expected{equalities_only(d.conclusion.antecedent), d.conclusion.succedent};
  return finish(project(d), calc, calc, expected);
}

Antecedent filter_last(const Antecedent& gamma, const Atom& f) {
  std::size_t last = last_index_of(gamma, f);
  Antecedent out;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (gamma[i] != f || i == last) out.push_back(gamma[i]);
  return out;
}

TransformOutcome keep_last(const Derivation& d, const Atom& f) {
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  require_checks(d, ccf);
  Sequent expected{filter_last(d.conclusion.antecedent, f), d.conclusion.succedent};
  return finish(keep_last_node(d, f), ccf, ccf, expected);
}

TransformOutcome admit_contraction(const Derivation& d) {
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  require_checks(d, ccf);
  require_doubled(d.conclusion);
  Sequent expected = d.conclusion;
  expected.antecedent.pop_back();
  return finish(admit(d), ccf, ccf, expected);
}

TransformOutcome saturate(const Derivation& d, const Antecedent& gamma0) {
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  for (const auto& a : d.conclusion.antecedent)
    if (!occurs(gamma0, a))
      throw Error(ErrorKind::PreconditionViolated, to_string(a) + " does not occur in the target antecedent");
  require_checks(d, ccf);
  Derivation cur = d;
  Antecedent distinct;
  for (const auto& a : d.conclusion.antecedent)
    if (!occurs(distinct, a)) distinct.push_back(a);
  for (const auto& a : distinct) cur = keep_last_node(cur, a);
  return finish(rearrange(std::move(cur), gamma0), ccf, ccf, Sequent{gamma0, d.conclusion.succedent});
}

TransformOutcome eliminate_contractions(const Derivation& d) {
  Calculus cf = Calculus::cf(Calculus::eqp());
  require_checks(d, cf);
  return finish(eliminate_node(d), cf, Calculus::ccf(Calculus::eqp()), d.conclusion);
}

TransformOutcome contraction_via_shared_cut(const Derivation& d1, const Calculus& calc) {
  if (calc.cut != CutMode::ContextSharing)
    throw Error(ErrorKind::PreconditionViolated, "needs a calculus with the context-sharing cut");
  require_checks(d1, calc);
  require_doubled(d1.conclusion);
  Sequent expected = d1.conclusion;
  expected.antecedent.pop_back();
  return finish(via_shared_cut(d1), calc, calc, expected);
}

TransformOutcome contractions_to_shared_cuts(const Derivation& d, const Calculus& calc) {
  if (calc.cut == CutMode::IndependentAtomic)
    throw Error(ErrorKind::PreconditionViolated, "independent cuts cannot be kept next to shared cuts");
  require_checks(d, calc);
  Calculus target = calc;
  target.cut = CutMode::ContextSharing;
  target.contraction_allowed = false;
  return finish(shared_cut_node(d), calc, target, d.conclusion);
}

}  // namespace eqc
