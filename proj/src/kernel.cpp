#include "eqcalc/kernel.hpp"

#include <algorithm>

namespace eqc {

std::string_view rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Axiom: return "axiom";
    case RuleKind::Refl: return "refl";
    case RuleKind::Weaken: return "weaken";
    case RuleKind::Exchange: return "exchange";
    case RuleKind::Contract: return "contract";
    case RuleKind::Cut: return "cut";
    case RuleKind::CutShared: return "cut-shared";
    case RuleKind::EqLeft1: return "eq-left-1";
    case RuleKind::EqLeft2: return "eq-left-2";
    case RuleKind::Cng: return "cng";
    case RuleKind::CngShared: return "cng-shared";
  }
  return "?";
}

std::size_t rule_arity(RuleKind k) {
  switch (k) {
    case RuleKind::Axiom:
    case RuleKind::Refl: return 0;
    case RuleKind::Cut:
    case RuleKind::CutShared:
    case RuleKind::Cng:
    case RuleKind::CngShared: return 2;
    default: return 1;
  }
}

bool operator==(const Derivation& a, const Derivation& b) {
  return a.conclusion == b.conclusion && a.rule == b.rule && a.premises == b.premises;
}

DerivationStats stats(const Derivation& d) {
  DerivationStats s;
  s.node_count = 1;
  for (const auto& p : d.premises) {
    DerivationStats ps = stats(p);
    s.height = std::max(s.height, ps.height + 1);
    s.node_count += ps.node_count;
    s.contraction_count += ps.contraction_count;
    s.cut_count += ps.cut_count;
    s.weakening_count += ps.weakening_count;
  }
  switch (d.kind()) {
    case RuleKind::Contract: ++s.contraction_count; break;
    case RuleKind::Cut:
    case RuleKind::CutShared: ++s.cut_count; break;
    case RuleKind::Weaken: ++s.weakening_count; break;
    default: break;
  }
  return s;
}

std::string_view violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::RuleDisabledInCalculus: return "RuleDisabledInCalculus";
    case ViolationKind::ShapeMismatch: return "ShapeMismatch";
    case ViolationKind::TemplateMismatch: return "TemplateMismatch";
    case ViolationKind::PremiseCountMismatch: return "PremiseCountMismatch";
  }
  return "?";
}

std::string to_string(const NodePath& path) {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

bool rule_enabled(RuleKind k, const Calculus& calc) {
  switch (k) {
    case RuleKind::Axiom:
    case RuleKind::Refl: return true;
    case RuleKind::Weaken: return calc.weakening_allowed;
    case RuleKind::Exchange: return calc.exchange_allowed;
    case RuleKind::Contract: return calc.contraction_allowed;
    case RuleKind::Cut: return calc.cut == CutMode::IndependentAtomic;
    case RuleKind::CutShared: return calc.cut == CutMode::ContextSharing;
    case RuleKind::EqLeft1:
    case RuleKind::EqLeft2: return calc.eq_mechanism == EqMechanism::EqLeftPair;
    case RuleKind::Cng: return calc.eq_mechanism == EqMechanism::Cng;
    case RuleKind::CngShared: return calc.eq_mechanism == EqMechanism::CngShared;
  }
  return false;
}

namespace {

using Result = std::optional<RuleViolation>;

Result shape(std::string msg) { return RuleViolation{ViolationKind::ShapeMismatch, std::move(msg)}; }
Result tmpl(std::string msg) { return RuleViolation{ViolationKind::TemplateMismatch, std::move(msg)}; }

Result disabled(RuleKind k, const Calculus& calc) {
  return RuleViolation{ViolationKind::RuleDisabledInCalculus,
                       std::string(rule_name(k)) + " is not a rule of " + calc.name()};
}

Antecedent concat(const Antecedent& a, const Antecedent& b) {
  Antecedent out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Antecedent slice(const Antecedent& a, std::size_t from, std::size_t to) {
  return Antecedent(a.begin() + static_cast<std::ptrdiff_t>(from), a.begin() + static_cast<std::ptrdiff_t>(to));
}

// Shared check for the equality rules: the premise succedent is D{r} and the
// conclusion succedent is D{s}.
Result check_replacement(const Template& tpl, const Term& r, const Term& s, const Atom& premise_succ,
                         const Atom& conclusion_succ) {
  if (apply_template(tpl, r) != premise_succ)
    return tmpl("premise succedent " + to_string(premise_succ) + " is not " + to_string(tpl) + "{v/" +
                to_string(r) + "}");
  if (apply_template(tpl, s) != conclusion_succ)
    return tmpl("conclusion succedent " + to_string(conclusion_succ) + " is not " + to_string(tpl) + "{v/" +
                to_string(s) + "}");
  return std::nullopt;
}

struct RuleChecker {
  const Sequent& c;
  std::span<const Sequent> p;

  Result operator()(const rule::Axiom&) const {
    if (c.antecedent.size() != 1 || c.antecedent[0] != c.succedent)
      return shape("axiom must have the form A => A");
    return std::nullopt;
  }

  Result operator()(const rule::Refl& r) const {
    if (!c.antecedent.empty()) return shape("reflexivity axiom has an empty antecedent");
    if (c.succedent != Atom::equality(r.term, r.term))
      return shape("reflexivity axiom must conclude " + to_string(r.term) + "=" + to_string(r.term));
    return std::nullopt;
  }

  Result operator()(const rule::Weaken& w) const {
    if (p[0].succedent != c.succedent) return shape("weakening must keep the succedent");
    if (c.antecedent != concat(p[0].antecedent, {w.introduced}))
      return shape("conclusion antecedent must be the premise antecedent followed by " + to_string(w.introduced));
    return std::nullopt;
  }

  Result operator()(const rule::Exchange& x) const {
    if (p[0].succedent != c.succedent) return shape("exchange must keep the succedent");
    if (x.index + 1 >= c.antecedent.size()) return shape("exchange index out of range");
    Antecedent swapped = p[0].antecedent;
    if (swapped.size() != c.antecedent.size()) return shape("exchange must keep the antecedent length");
    std::swap(swapped[x.index], swapped[x.index + 1]);
    if (swapped != c.antecedent)
      return shape("conclusion antecedent is not the premise with positions " + std::to_string(x.index) + "," +
                   std::to_string(x.index + 1) + " swapped");
    return std::nullopt;
  }

  Result operator()(const rule::Contract&) const {
    if (p[0].succedent != c.succedent) return shape("contraction must keep the succedent");
    const Antecedent& pa = p[0].antecedent;
    if (c.antecedent.empty() || pa.size() != c.antecedent.size() + 1)
      return shape("contraction premise must have exactly one more antecedent atom");
    if (slice(pa, 0, pa.size() - 1) != c.antecedent || pa.back() != c.antecedent.back())
      return shape("contraction premise must be G,F,F => H for conclusion G,F => H");
    return std::nullopt;
  }

  Result operator()(const rule::Cut& cut) const {
    if (cut.split > c.antecedent.size()) return shape("cut split out of range");
    if (p[0].succedent != cut.formula) return shape("left premise must conclude the cut formula");
    if (p[0].antecedent != slice(c.antecedent, 0, cut.split))
      return shape("left premise antecedent must be the first " + std::to_string(cut.split) +
                   " conclusion atoms");
    if (p[1].succedent != c.succedent) return shape("right premise must have the conclusion's succedent");
    if (p[1].antecedent != concat(slice(c.antecedent, cut.split, c.antecedent.size()), {cut.formula}))
      return shape("right premise antecedent must be the remaining conclusion atoms followed by the cut formula");
    return std::nullopt;
  }

  Result operator()(const rule::CutShared& cut) const {
    if (p[0].succedent != cut.formula) return shape("left premise must conclude the cut formula");
    if (p[0].antecedent != c.antecedent) return shape("left premise must share the conclusion antecedent");
    if (p[1].succedent != c.succedent) return shape("right premise must have the conclusion's succedent");
    if (p[1].antecedent != concat(c.antecedent, {cut.formula}))
      return shape("right premise antecedent must be the conclusion antecedent followed by the cut formula");
    return std::nullopt;
  }

  Result eq_left(const Template& tpl, const Term& r, const Term& s, const Atom& principal) const {
    if (c.antecedent.empty() || c.antecedent.back() != principal)
      return shape("conclusion antecedent must end with " + to_string(principal));
    if (p[0].antecedent != slice(c.antecedent, 0, c.antecedent.size() - 1))
      return shape("premise antecedent must be the conclusion antecedent without its last atom");
    return check_replacement(tpl, r, s, p[0].succedent, c.succedent);
  }

  Result operator()(const rule::EqLeft1& e) const { return eq_left(e.tpl, e.r, e.s, Atom::equality(e.r, e.s)); }
  Result operator()(const rule::EqLeft2& e) const { return eq_left(e.tpl, e.r, e.s, Atom::equality(e.s, e.r)); }

  Result operator()(const rule::Cng& e) const {
    if (e.split > c.antecedent.size()) return shape("cng split out of range");
    if (p[0].antecedent != slice(c.antecedent, 0, e.split))
      return shape("left premise antecedent must be the first " + std::to_string(e.split) + " conclusion atoms");
    if (p[1].antecedent != slice(c.antecedent, e.split, c.antecedent.size()))
      return shape("right premise antecedent must be the remaining conclusion atoms");
    if (p[1].succedent != Atom::equality(e.r, e.s))
      return shape("right premise must conclude " + to_string(e.r) + "=" + to_string(e.s));
    return check_replacement(e.tpl, e.r, e.s, p[0].succedent, c.succedent);
  }

  Result operator()(const rule::CngShared& e) const {
    if (p[0].antecedent != c.antecedent || p[1].antecedent != c.antecedent)
      return shape("both premises must share the conclusion antecedent");
    if (p[1].succedent != Atom::equality(e.r, e.s))
      return shape("right premise must conclude " + to_string(e.r) + "=" + to_string(e.s));
    return check_replacement(e.tpl, e.r, e.s, p[0].succedent, c.succedent);
  }
};

void check_node(const Derivation& d, const Calculus& calc, NodePath& path, CheckReport& report) {
  std::vector<Sequent> premise_sequents;
  premise_sequents.reserve(d.premises.size());
  for (const auto& p : d.premises) premise_sequents.push_back(p.conclusion);
  if (auto v = check_rule(d.conclusion, d.rule, premise_sequents, calc))
    report.violations.push_back({path, v->kind, v->message});
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(i);
    check_node(d.premises[i], calc, path, report);
    path.pop_back();
  }
}

}  // namespace

std::optional<RuleViolation> check_rule(const Sequent& conclusion, const RuleApp& rule,
                                        std::span<const Sequent> premises, const Calculus& calc) {
  RuleKind k = kind_of(rule);
  if (premises.size() != rule_arity(k))
    return RuleViolation{ViolationKind::PremiseCountMismatch,
                         std::string(rule_name(k)) + " takes " + std::to_string(rule_arity(k)) + " premise(s), got " +
                             std::to_string(premises.size())};
  if (!rule_enabled(k, calc)) return disabled(k, calc);
  return std::visit(RuleChecker{conclusion, premises}, rule);
}

CheckReport check_derivation(const Derivation& d, const Calculus& calc) {
  CheckReport report;
  NodePath path;
  check_node(d, calc, path, report);
  report.ok = report.violations.empty();
  report.stats = stats(d);
  return report;
}

}  // namespace eqc
