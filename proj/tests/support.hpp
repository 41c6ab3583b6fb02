#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "eqcalc/derivation_io.hpp"
#include "eqcalc/fuzz.hpp"
#include "eqcalc/parse.hpp"

namespace eqc::test {

inline Signature af_signature() {
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("f", 1);
  return sig;
}

// a, b, f, g plus predicates P/1 and Q/0.
inline Signature rich_signature() {
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("b", 0);
  sig.add_function("c", 0);
  sig.add_function("f", 1);
  sig.add_function("g", 1);
  sig.add_predicate("P", 1);
  sig.add_predicate("Q", 0);
  return sig;
}

inline Term T(const std::string& s) { return parse_term(s, rich_signature()); }
inline Atom A(const std::string& s) { return parse_atom(s, rich_signature()); }
inline Sequent S(const std::string& s) { return parse_sequent(s, rich_signature()); }
inline Antecedent G(std::initializer_list<const char*> atoms) {
  Antecedent out;
  for (const char* a : atoms) out.push_back(A(a));
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return std::string(EQC_FIXTURES) + "/" + name; }

inline Derivation contraction_fixture() {
  return parse_derivation(read_file(fixture("contraction_example.eqd")), parse_signature(read_file(fixture("af.sig"))));
}

inline FuzzConfig fuzz_config(const Calculus& calc, std::uint64_t seed, std::size_t size = 12) {
  FuzzConfig cfg;
  cfg.seed = seed;
  cfg.target_size = size;
  cfg.calculus = calc;
  cfg.signature = default_fuzz_signature();
  return cfg;
}

}  // namespace eqc::test
