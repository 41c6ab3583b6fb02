#include "eqcalc/term.hpp"

#include <algorithm>
#include <sstream>

#include "eqcalc/error.hpp"

namespace eqc {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::EmptySuccedent: return "EmptySuccedent";
    case ErrorKind::SignatureError: return "SignatureError";
    case ErrorKind::UnknownRuleName: return "UnknownRuleName";
    case ErrorKind::PremiseCountMismatch: return "PremiseCountMismatch";
    case ErrorKind::SourceDoesNotCheck: return "SourceDoesNotCheck";
    case ErrorKind::SuccedentNotEquality: return "SuccedentNotEquality";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::BoundsEmpty: return "BoundsEmpty";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> offset)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message +
                         (offset ? " (at byte " + std::to_string(*offset) + ")" : "")),
      kind_(kind),
      message_(message),
      offset_(offset) {}

// Signature

bool is_valid_symbol_name(const std::string& name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

namespace {

void validate_symbol(const std::string& name, int arity) {
  if (!is_valid_symbol_name(name))
    throw Error(ErrorKind::SignatureError, "invalid symbol name '" + name + "'");
  if (arity < 0)
    throw Error(ErrorKind::SignatureError, "negative arity for '" + name + "'");
}

}  // namespace

void Signature::add_function(const std::string& name, int arity) {
  validate_symbol(name, arity);
  if (predicates_.count(name))
    throw Error(ErrorKind::SignatureError, "'" + name + "' is already a predicate");
  auto [it, inserted] = functions_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error(ErrorKind::SignatureError, "conflicting arity for '" + name + "'");
}

void Signature::add_predicate(const std::string& name, int arity) {
  validate_symbol(name, arity);
  if (functions_.count(name))
    throw Error(ErrorKind::SignatureError, "'" + name + "' is already a function");
  auto [it, inserted] = predicates_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error(ErrorKind::SignatureError, "conflicting arity for '" + name + "'");
}

int Signature::function_arity(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw Error(ErrorKind::UnknownSymbol, "unknown function '" + name + "'");
  return it->second;
}

int Signature::predicate_arity(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw Error(ErrorKind::UnknownSymbol, "unknown predicate '" + name + "'");
  return it->second;
}

std::string to_string(const Signature& sig) {
  std::string out;
  for (const auto& [name, arity] : sig.functions()) out += "fun " + name + " " + std::to_string(arity) + "\n";
  for (const auto& [name, arity] : sig.predicates()) out += "pred " + name + " " + std::to_string(arity) + "\n";
  return out;
}

// Term

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth() + 1);
  return d;
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args) n += a.size();
  return n;
}

bool Term::contains(const Term& sub) const {
  if (*this == sub) return true;
  return std::any_of(args.begin(), args.end(), [&](const Term& a) { return a.contains(sub); });
}

bool operator==(const Term& a, const Term& b) { return a.head == b.head && a.args == b.args; }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.head <=> b.head; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// Atom

Atom Atom::equality(Term lhs, Term rhs) {
  Atom a;
  a.kind = Kind::Equality;
  a.args.push_back(std::move(lhs));
  a.args.push_back(std::move(rhs));
  return a;
}

Atom Atom::predicate(std::string name, std::vector<Term> args) {
  Atom a;
  a.kind = Kind::Predicate;
  a.name = std::move(name);
  a.args = std::move(args);
  return a;
}

bool operator==(const Atom& a, const Atom& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind == Atom::Kind::Equality ? std::strong_ordering::less
                                                               : std::strong_ordering::greater;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool operator==(const Sequent& a, const Sequent& b) {
  return a.antecedent == b.antecedent && a.succedent == b.succedent;
}

std::strong_ordering operator<=>(const Sequent& a, const Sequent& b) {
  if (auto c = a.succedent <=> b.succedent; c != 0) return c;
  if (auto c = a.antecedent.size() <=> b.antecedent.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.antecedent.size(); ++i)
    if (auto c = a.antecedent[i] <=> b.antecedent[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// Rendering

namespace {

void render(const Term& t, std::string& out) {
  out += t.head;
  if (t.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    render(t.args[i], out);
  }
  out += ')';
}

void render_sexpr(const Term& t, std::string& out) {
  if (t.args.empty()) {
    out += t.head;
    return;
  }
  out += '(';
  out += t.head;
  for (const auto& a : t.args) {
    out += ' ';
    render_sexpr(a, out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  render(t, out);
  return out;
}

std::string to_string(const Atom& a) {
  std::string out;
  if (a.is_equality()) {
    render(a.lhs(), out);
    out += '=';
    render(a.rhs(), out);
    return out;
  }
  out += a.name;
  if (a.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    render(a.args[i], out);
  }
  out += ')';
  return out;
}

std::string to_string(const Antecedent& gamma) {
  std::string out;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (i) out += ", ";
    out += to_string(gamma[i]);
  }
  return out;
}

std::string to_string(const Sequent& s) {
  if (s.antecedent.empty()) return "=> " + to_string(s.succedent);
  return to_string(s.antecedent) + " => " + to_string(s.succedent);
}

std::string to_sexpr(const Term& t) {
  std::string out;
  render_sexpr(t, out);
  return out;
}

std::string to_sexpr(const Atom& a) {
  std::string out;
  if (a.is_equality()) {
    out += "(= ";
    render_sexpr(a.lhs(), out);
    out += ' ';
    render_sexpr(a.rhs(), out);
    out += ')';
    return out;
  }
  if (a.args.empty()) return a.name;
  out += '(';
  out += a.name;
  for (const auto& t : a.args) {
    out += ' ';
    render_sexpr(t, out);
  }
  out += ')';
  return out;
}

std::string to_sexpr(const Sequent& s) {
  std::string out = "(seq";
  for (const auto& a : s.antecedent) out += " " + to_sexpr(a);
  out += " => " + to_sexpr(s.succedent) + ")";
  return out;
}

// Hashing

std::size_t TermHash::operator()(const Term& t) const {
  std::size_t h = std::hash<std::string>{}(t.head);
  for (const auto& a : t.args) h = h * 1000003u ^ (*this)(a);
  return h;
}

std::size_t AtomHash::operator()(const Atom& a) const {
  std::size_t h = a.is_equality() ? 0x9e3779b9u : std::hash<std::string>{}(a.name);
  TermHash th;
  for (const auto& t : a.args) h = h * 1000003u ^ th(t);
  return h;
}

}  // namespace eqc
