#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace eqc {

// Function and predicate symbols with their arities. Arity 0 functions are
// individual parameters (constants). `=` is built in and never declared.
class Signature {
 public:
  void add_function(const std::string& name, int arity);
  void add_predicate(const std::string& name, int arity);

  bool has_function(const std::string& name) const { return functions_.count(name) != 0; }
  bool has_predicate(const std::string& name) const { return predicates_.count(name) != 0; }
  int function_arity(const std::string& name) const;
  int predicate_arity(const std::string& name) const;

  const std::map<std::string, int>& functions() const { return functions_; }
  const std::map<std::string, int>& predicates() const { return predicates_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int> functions_;
  std::map<std::string, int> predicates_;
};

bool is_valid_symbol_name(const std::string& name);

// Ground first-order term. Structural equality is syntactic identity.
struct Term {
  std::string head;
  std::vector<Term> args;

  Term() = default;
  explicit Term(std::string h, std::vector<Term> a = {}) : head(std::move(h)), args(std::move(a)) {}

  bool is_constant() const { return args.empty(); }
  // Nesting depth: constants have depth 0.
  std::size_t depth() const;
  std::size_t size() const;
  bool contains(const Term& sub) const;
};

bool operator==(const Term& a, const Term& b);
std::strong_ordering operator<=>(const Term& a, const Term& b);

struct Atom {
  enum class Kind { Equality, Predicate };

  Kind kind = Kind::Equality;
  std::string name;  // predicate symbol; empty for equalities
  std::vector<Term> args;

  static Atom equality(Term lhs, Term rhs);
  static Atom predicate(std::string name, std::vector<Term> args = {});

  bool is_equality() const { return kind == Kind::Equality; }
  // p=p
  bool is_identity() const { return is_equality() && args[0] == args[1]; }
  const Term& lhs() const { return args.at(0); }
  const Term& rhs() const { return args.at(1); }
};

bool operator==(const Atom& a, const Atom& b);
std::strong_ordering operator<=>(const Atom& a, const Atom& b);

using Antecedent = std::vector<Atom>;

struct Sequent {
  Antecedent antecedent;
  Atom succedent;
};

bool operator==(const Sequent& a, const Sequent& b);
std::strong_ordering operator<=>(const Sequent& a, const Sequent& b);

// Concrete (infix) rendering: `f(f(a))`, `a=f(a)`, `P(a,b)`, `a=f(a) => a=f(f(a))`.
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Antecedent& gamma);
std::string to_string(const Sequent& s);

// Prefix s-expression rendering used by derivation files: `(f (f a))`, `(= a (f a))`.
std::string to_sexpr(const Term& t);
std::string to_sexpr(const Atom& a);
std::string to_sexpr(const Sequent& s);

// Serialized signature file: `fun NAME ARITY` / `pred NAME ARITY` lines.
std::string to_string(const Signature& sig);

struct TermHash {
  std::size_t operator()(const Term& t) const;
};
struct AtomHash {
  std::size_t operator()(const Atom& a) const;
};

}  // namespace eqc
