#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqcalc/calculus.hpp"
#include "eqcalc/derivation.hpp"

namespace eqc {

enum class ViolationKind {
  RuleDisabledInCalculus,
  ShapeMismatch,
  TemplateMismatch,
  PremiseCountMismatch,
};

std::string_view violation_kind_name(ViolationKind k);

struct RuleViolation {
  ViolationKind kind;
  std::string message;
};

// Indices of premises from the root; empty is the root.
using NodePath = std::vector<std::size_t>;
std::string to_string(const NodePath& path);

struct Violation {
  NodePath path;
  ViolationKind kind;
  std::string message;
};

struct CheckReport {
  bool ok = true;
  std::vector<Violation> violations;
  DerivationStats stats;
};

bool rule_enabled(RuleKind k, const Calculus& calc);

// Validates a single inference against the exact figure of its rule.
// Returns nullopt when the instance is correct.
std::optional<RuleViolation> check_rule(const Sequent& conclusion, const RuleApp& rule,
                                        std::span<const Sequent> premises, const Calculus& calc);

CheckReport check_derivation(const Derivation& d, const Calculus& calc);

inline bool checks(const Derivation& d, const Calculus& calc) { return check_derivation(d, calc).ok; }

}  // namespace eqc
