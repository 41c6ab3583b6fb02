#include "eqcalc/parse.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "eqcalc/error.hpp"

namespace eqc {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Eq, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw Error(ErrorKind::SyntaxError, std::string("expected ") + what, cur_.offset);
    return take();
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      cur_ = {Tok::End, "", start};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      cur_ = {Tok::Ident, std::string(src_.substr(start, pos_ - start)), start};
      return;
    }
    ++pos_;
    switch (c) {
      case '(': cur_ = {Tok::LParen, "(", start}; return;
      case ')': cur_ = {Tok::RParen, ")", start}; return;
      case ',': cur_ = {Tok::Comma, ",", start}; return;
      case '=':
        if (pos_ < src_.size() && src_[pos_] == '>') {
          ++pos_;
          cur_ = {Tok::Arrow, "=>", start};
        } else {
          cur_ = {Tok::Eq, "=", start};
        }
        return;
      default:
        throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", start);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_{Tok::End, "", 0};
};

// Untyped parse tree; symbol classes are resolved against a signature afterwards.
struct RawTerm {
  std::string name;
  std::size_t offset = 0;
  std::vector<RawTerm> args;
};

struct RawAtom {
  RawTerm lhs;
  std::optional<RawTerm> rhs;
};

struct RawSequent {
  std::vector<RawAtom> antecedent;
  RawAtom succedent;
};

RawTerm parse_raw_term(Lexer& lx) {
  Token id = lx.expect(Tok::Ident, "identifier");
  RawTerm t{id.text, id.offset, {}};
  if (lx.peek().kind == Tok::LParen) {
    lx.take();
    t.args.push_back(parse_raw_term(lx));
    while (lx.peek().kind == Tok::Comma) {
      lx.take();
      t.args.push_back(parse_raw_term(lx));
    }
    lx.expect(Tok::RParen, "')'");
  }
  return t;
}

RawAtom parse_raw_atom(Lexer& lx) {
  RawAtom a{parse_raw_term(lx), std::nullopt};
  if (lx.peek().kind == Tok::Eq) {
    lx.take();
    a.rhs = parse_raw_term(lx);
  }
  return a;
}

RawSequent parse_raw_sequent(Lexer& lx) {
  RawSequent s;
  if (lx.peek().kind != Tok::Arrow) {
    s.antecedent.push_back(parse_raw_atom(lx));
    while (lx.peek().kind == Tok::Comma) {
      lx.take();
      s.antecedent.push_back(parse_raw_atom(lx));
    }
  }
  lx.expect(Tok::Arrow, "'=>'");
  if (lx.peek().kind == Tok::End)
    throw Error(ErrorKind::EmptySuccedent, "sequent has no succedent", lx.peek().offset);
  s.succedent = parse_raw_atom(lx);
  return s;
}

void expect_end(Lexer& lx) {
  if (lx.peek().kind != Tok::End)
    throw Error(ErrorKind::SyntaxError, "trailing input '" + lx.peek().text + "'", lx.peek().offset);
}

Term resolve_term(const RawTerm& raw, const Signature& sig) {
  if (!sig.has_function(raw.name)) {
    if (sig.has_predicate(raw.name))
      throw Error(ErrorKind::UnknownSymbol, "predicate '" + raw.name + "' used as a term", raw.offset);
    throw Error(ErrorKind::UnknownSymbol, "unknown function symbol '" + raw.name + "'", raw.offset);
  }
  int arity = sig.function_arity(raw.name);
  if (static_cast<int>(raw.args.size()) != arity)
    throw Error(ErrorKind::ArityMismatch,
                "'" + raw.name + "' expects " + std::to_string(arity) + " argument(s), got " +
                    std::to_string(raw.args.size()),
                raw.offset);
  Term t(raw.name);
  t.args.reserve(raw.args.size());
  for (const auto& a : raw.args) t.args.push_back(resolve_term(a, sig));
  return t;
}

Atom resolve_atom(const RawAtom& raw, const Signature& sig) {
  if (raw.rhs) return Atom::equality(resolve_term(raw.lhs, sig), resolve_term(*raw.rhs, sig));
  const RawTerm& p = raw.lhs;
  if (!sig.has_predicate(p.name)) {
    if (sig.has_function(p.name))
      throw Error(ErrorKind::SyntaxError, "expected '=' after term", p.offset);
    throw Error(ErrorKind::UnknownSymbol, "unknown predicate symbol '" + p.name + "'", p.offset);
  }
  int arity = sig.predicate_arity(p.name);
  if (static_cast<int>(p.args.size()) != arity)
    throw Error(ErrorKind::ArityMismatch,
                "'" + p.name + "' expects " + std::to_string(arity) + " argument(s), got " +
                    std::to_string(p.args.size()),
                p.offset);
  std::vector<Term> args;
  for (const auto& a : p.args) args.push_back(resolve_term(a, sig));
  return Atom::predicate(p.name, std::move(args));
}

void collect_functions(const RawTerm& t, Signature& sig) {
  try {
    sig.add_function(t.name, static_cast<int>(t.args.size()));
  } catch (const Error& e) {
    throw Error(ErrorKind::SignatureError, e.message(), t.offset);
  }
  for (const auto& a : t.args) collect_functions(a, sig);
}

// Predicates are registered first so that `P = a` is reported against P.
void collect_predicates(const RawAtom& a, Signature& sig) {
  if (a.rhs) return;
  try {
    sig.add_predicate(a.lhs.name, static_cast<int>(a.lhs.args.size()));
  } catch (const Error& e) {
    throw Error(ErrorKind::SignatureError, e.message(), a.lhs.offset);
  }
}

void collect_atom_terms(const RawAtom& a, Signature& sig) {
  if (a.rhs) {
    collect_functions(a.lhs, sig);
    collect_functions(*a.rhs, sig);
  } else {
    for (const auto& t : a.lhs.args) collect_functions(t, sig);
  }
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  RawTerm raw = parse_raw_term(lx);
  expect_end(lx);
  return resolve_term(raw, sig);
}

Atom parse_atom(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  RawAtom raw = parse_raw_atom(lx);
  expect_end(lx);
  return resolve_atom(raw, sig);
}

Sequent parse_sequent(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  RawSequent raw = parse_raw_sequent(lx);
  expect_end(lx);
  Sequent s;
  for (const auto& a : raw.antecedent) s.antecedent.push_back(resolve_atom(a, sig));
  s.succedent = resolve_atom(raw.succedent, sig);
  return s;
}

Signature infer_signature(std::string_view sequent_text) {
  Lexer lx(sequent_text);
  RawSequent raw = parse_raw_sequent(lx);
  expect_end(lx);
  Signature sig;
  for (const auto& a : raw.antecedent) collect_predicates(a, sig);
  collect_predicates(raw.succedent, sig);
  for (const auto& a : raw.antecedent) collect_atom_terms(a, sig);
  collect_atom_terms(raw.succedent, sig);
  return sig;
}

Signature parse_signature(std::string_view text) {
  Signature sig;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string line(text.substr(line_start, line_end - line_start));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string keyword, name, arity_text, extra;
    if (in >> keyword) {
      if (!(in >> name >> arity_text) || (in >> extra))
        throw Error(ErrorKind::SyntaxError, "expected 'fun|pred NAME ARITY'", line_start);
      int arity = 0;
      try {
        std::size_t used = 0;
        arity = std::stoi(arity_text, &used);
        if (used != arity_text.size()) throw std::invalid_argument(arity_text);
      } catch (const std::exception&) {
        throw Error(ErrorKind::SyntaxError, "bad arity '" + arity_text + "'", line_start);
      }
      try {
        if (keyword == "fun")
          sig.add_function(name, arity);
        else if (keyword == "pred")
          sig.add_predicate(name, arity);
        else
          throw Error(ErrorKind::SyntaxError, "unknown declaration '" + keyword + "'", line_start);
      } catch (const Error& e) {
        if (e.offset()) throw;
        throw Error(e.kind(), e.message(), line_start);
      }
    }
    line_start = line_end + 1;
  }
  return sig;
}

}  // namespace eqc
