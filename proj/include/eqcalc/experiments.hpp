#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eqcalc/calculus.hpp"
#include "eqcalc/derivation.hpp"

namespace eqc {

struct ExperimentOptions {
  std::string fixtures_dir;
  unsigned jobs = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // deterministic; no timings
  double seconds = 0;
};

constexpr int kCriterionCount = 8;

CriterionResult run_criterion(int id, const ExperimentOptions& opts);

// `PASS 3 contraction elimination: ...`, with ` [1.23s]` when timings is set.
std::string format_result(const CriterionResult& r, bool timings);

// Every .eqd file in the fixtures directory, parsed over fixtures/af.sig, in
// file-name order.
std::vector<std::pair<std::string, Derivation>> load_fixtures(const std::string& dir);

// Enumeration behind the completeness cross-check: over {a, b, f/1, g/1},
// every sequent with at most two antecedent equalities between terms of
// depth at most 2 is searched in ccf.EQ' and compared with the oracle.
struct CompletenessTally {
  std::size_t sequents = 0;
  std::size_t valid = 0;
  std::size_t found = 0;
  std::size_t disagreements = 0;
  std::vector<std::string> examples;  // first few disagreements
};

CompletenessTally completeness_sweep(unsigned jobs);

// The two-equality goal in EQ_M- (h8 d4), EQ_M (h4) and ccf.EQ' (h6).
struct NecessityReport {
  bool eqm_minus_not_found = false;
  bool eqm_found = false;
  bool ccf_found = false;
  std::string eqm_minus_line;
  std::vector<std::string> lines;
};

NecessityReport contraction_necessity();

}  // namespace eqc
