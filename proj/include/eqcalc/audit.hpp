#pragma once

#include <string_view>

#include "eqcalc/derivation.hpp"

namespace eqc {

enum class AuditResult { Pass, Violation, NotApplicable };

std::string_view audit_result_name(AuditResult r);

// Identity antecedent p1=p1,...,pn=pn and equality succedent r=s: r and s
// must be the same term. Requires d to check in EQ_M (EQ_M- is included).
AuditResult audit_identity_antecedent(const Derivation& d);

// Antecedent of identities plus exactly one other equality E, succedent
// a=f(f(a)) or f(f(a))=a: E must be a=f(f(a)) or f(f(a))=a. Requires d to
// check in EQ_M-.
AuditResult audit_single_equality(const Derivation& d);

}  // namespace eqc
