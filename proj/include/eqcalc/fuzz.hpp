#pragma once

#include <array>
#include <cstdint>

#include "eqcalc/calculus.hpp"
#include "eqcalc/derivation.hpp"

namespace eqc {

constexpr std::size_t kRuleKinds = 11;

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::size_t target_size = 12;  // node count to reach
  Calculus calculus;
  Signature signature;
  // Indexed by RuleKind. Rules disabled in the calculus get weight 0.
  std::array<double, kRuleKinds> weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::size_t max_term_depth = 2;
};

// {a/0, b/0, f/1, g/1, P/1}
Signature default_fuzz_signature();

// Builds a derivation forward from axioms and reflexivity by weighted random
// rule applications. Deterministic per config. The result checks in
// cfg.calculus.
Derivation fuzz_derivation(const FuzzConfig& cfg);

}  // namespace eqc
