#include "eqcalc/audit.hpp"

#include "eqcalc/error.hpp"
#include "eqcalc/kernel.hpp"

namespace eqc {

std::string_view audit_result_name(AuditResult r) {
  switch (r) {
    case AuditResult::Pass: return "pass";
    case AuditResult::Violation: return "violation";
    case AuditResult::NotApplicable: return "not-applicable";
  }
  return "?";
}

AuditResult audit_identity_antecedent(const Derivation& d) {
  if (!checks(d, Calculus::eqm()))
    throw Error(ErrorKind::PreconditionViolated, "audit_identity_antecedent needs a derivation that checks in EQ_M");
  const Sequent& s = d.conclusion;
  if (!s.succedent.is_equality()) return AuditResult::NotApplicable;
  for (const auto& a : s.antecedent)
    if (!a.is_identity()) return AuditResult::NotApplicable;
  return s.succedent.is_identity() ? AuditResult::Pass : AuditResult::Violation;
}

AuditResult audit_single_equality(const Derivation& d) {
  if (!checks(d, Calculus::eqm_minus()))
    throw Error(ErrorKind::PreconditionViolated, "audit_single_equality needs a derivation that checks in EQ_M-");
  const Term a("a");
  const Term ffa("f", {Term("f", {a})});
  const Atom forward = Atom::equality(a, ffa);
  const Atom backward = Atom::equality(ffa, a);
  const Sequent& s = d.conclusion;
  if (!(s.succedent == forward || s.succedent == backward)) return AuditResult::NotApplicable;
  const Atom* e = nullptr;
  for (const auto& x : s.antecedent) {
    if (x.is_identity()) continue;
    if (!x.is_equality() || e) return AuditResult::NotApplicable;
    e = &x;
  }
  if (!e) return AuditResult::NotApplicable;
  return *e == forward || *e == backward ? AuditResult::Pass : AuditResult::Violation;
}

}  // namespace eqc
