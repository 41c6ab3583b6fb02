#include "eqcalc/derivation_io.hpp"

#include <array>
#include <optional>

#include "eqcalc/error.hpp"
#include "eqcalc/sexpr.hpp"

namespace eqc {

namespace {

constexpr std::array<RuleKind, 11> kAllRules = {
    RuleKind::Axiom,  RuleKind::Refl,    RuleKind::Weaken,  RuleKind::Exchange,
    RuleKind::Contract, RuleKind::Cut,   RuleKind::CutShared, RuleKind::EqLeft1,
    RuleKind::EqLeft2, RuleKind::Cng,    RuleKind::CngShared};

std::optional<RuleKind> rule_from_name(std::string_view name) {
  for (RuleKind k : kAllRules)
    if (rule_name(k) == name) return k;
  return std::nullopt;
}

bool is_param_tag(std::string_view s) {
  return s == "term" || s == "atom" || s == "index" || s == "split" || s == "tpl" || s == "r" || s == "s";
}

[[noreturn]] void syntax(const std::string& msg, const SExpr& at) {
  throw Error(ErrorKind::SyntaxError, msg, at.offset);
}

class Decoder {
 public:
  explicit Decoder(const Signature& sig) : sig_(sig) {}

  Term term(const SExpr& e) const {
    if (!e.is_list) {
      if (e.symbol == Pattern::kHole) syntax("hole '_' is only allowed inside (tpl ...)", e);
      check_function(e.symbol, 0, e);
      return Term(e.symbol);
    }
    if (e.items.size() < 2 || e.items[0].is_list) syntax("expected (FUNCTION ARG+)", e);
    const std::string& head = e.items[0].symbol;
    check_function(head, e.items.size() - 1, e);
    Term t(head);
    for (std::size_t i = 1; i < e.items.size(); ++i) t.args.push_back(term(e.items[i]));
    return t;
  }

  Pattern pattern(const SExpr& e) const {
    if (!e.is_list) {
      if (e.symbol == Pattern::kHole) return Pattern::hole();
      check_function(e.symbol, 0, e);
      return Pattern{e.symbol, {}};
    }
    if (e.items.size() < 2 || e.items[0].is_list) syntax("expected (FUNCTION ARG+)", e);
    const std::string& head = e.items[0].symbol;
    check_function(head, e.items.size() - 1, e);
    Pattern p{head, {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) p.args.push_back(pattern(e.items[i]));
    return p;
  }

  Atom atom(const SExpr& e) const {
    Template shape = atom_shape(e, false);
    if (!e.is_list) return Atom::predicate(shape.name);
    return atom_from(e);
  }

  Template tpl(const SExpr& e) const { return atom_shape(e, true); }

  Sequent sequent(const SExpr& e) const {
    if (!e.has_head("seq")) syntax("expected (seq ATOM* => ATOM)", e);
    Sequent s;
    std::size_t i = 1;
    for (; i < e.items.size() && !e.items[i].is_symbol("=>"); ++i) s.antecedent.push_back(atom(e.items[i]));
    if (i == e.items.size()) syntax("missing '=>' in sequent", e);
    if (i + 1 == e.items.size()) throw Error(ErrorKind::EmptySuccedent, "sequent has no succedent", e.offset);
    if (i + 2 != e.items.size()) syntax("succedent must be exactly one atom", e.items[i + 2]);
    s.succedent = atom(e.items[i + 1]);
    return s;
  }

  Derivation node(const SExpr& e) const {
    if (!e.is_list || e.items.empty() || e.items[0].is_list) syntax("expected (RULE ...)", e);
    auto kind = rule_from_name(e.items[0].symbol);
    if (!kind)
      throw Error(ErrorKind::UnknownRuleName, "unknown rule '" + e.items[0].symbol + "'", e.items[0].offset);

    std::optional<Term> term_p, r_p, s_p;
    std::optional<Atom> atom_p;
    std::optional<std::size_t> index_p, split_p;
    std::optional<Template> tpl_p;
    std::vector<Derivation> premises;
    std::optional<Sequent> conclusion;

    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& item = e.items[i];
      if (conclusion) syntax("(seq ...) must be the last element of a node", item);
      if (item.has_head("seq")) {
        conclusion = sequent(item);
        continue;
      }
      if (item.is_list && !item.items.empty() && !item.items[0].is_list && is_param_tag(item.items[0].symbol)) {
        if (!premises.empty()) syntax("parameters must precede premises", item);
        if (item.items.size() != 2) syntax("parameter takes exactly one value", item);
        const std::string& tag = item.items[0].symbol;
        const SExpr& v = item.items[1];
        auto once = [&](bool present) {
          if (present) syntax("duplicate parameter '" + tag + "'", item);
        };
        if (tag == "term") once(term_p.has_value()), term_p = term(v);
        else if (tag == "r") once(r_p.has_value()), r_p = term(v);
        else if (tag == "s") once(s_p.has_value()), s_p = term(v);
        else if (tag == "atom") once(atom_p.has_value()), atom_p = atom(v);
        else if (tag == "tpl") once(tpl_p.has_value()), tpl_p = tpl(v);
        else if (tag == "index") once(index_p.has_value()), index_p = number(v);
        else if (tag == "split") once(split_p.has_value()), split_p = number(v);
        continue;
      }
      premises.push_back(node(item));
    }
    if (!conclusion) syntax("node has no (seq ...) conclusion", e);
    if (premises.size() != rule_arity(*kind))
      throw Error(ErrorKind::PremiseCountMismatch,
                  std::string(rule_name(*kind)) + " takes " + std::to_string(rule_arity(*kind)) +
                      " premise(s), got " + std::to_string(premises.size()),
                  e.offset);

    auto need = [&](const auto& opt, const char* tag) {
      if (!opt) syntax(std::string(rule_name(*kind)) + " requires (" + tag + " ...)", e);
      return *opt;
    };
    auto forbid = [&](bool present, const char* tag) {
      if (present) syntax(std::string(rule_name(*kind)) + " takes no (" + tag + " ...)", e);
    };
    bool any_tpl = tpl_p || r_p || s_p;
    RuleApp app;
    switch (*kind) {
      case RuleKind::Axiom:
        forbid(term_p || atom_p || index_p || split_p || any_tpl, "parameter");
        app = rule::Axiom{};
        break;
      case RuleKind::Refl: {
        forbid(atom_p || index_p || split_p || any_tpl, "parameter");
        Term t;
        if (term_p) {
          t = *term_p;
        } else if (conclusion->succedent.is_equality()) {
          t = conclusion->succedent.lhs();
        } else {
          syntax("refl requires (term ...)", e);
        }
        app = rule::Refl{t};
        break;
      }
      case RuleKind::Weaken:
        forbid(term_p || index_p || split_p || any_tpl, "parameter");
        app = rule::Weaken{need(atom_p, "atom")};
        break;
      case RuleKind::Exchange:
        forbid(term_p || atom_p || split_p || any_tpl, "parameter");
        app = rule::Exchange{need(index_p, "index")};
        break;
      case RuleKind::Contract:
        forbid(term_p || atom_p || index_p || split_p || any_tpl, "parameter");
        app = rule::Contract{};
        break;
      case RuleKind::Cut:
        forbid(term_p || index_p || any_tpl, "parameter");
        app = rule::Cut{need(atom_p, "atom"), need(split_p, "split")};
        break;
      case RuleKind::CutShared:
        forbid(term_p || index_p || split_p || any_tpl, "parameter");
        app = rule::CutShared{need(atom_p, "atom")};
        break;
      case RuleKind::EqLeft1:
        forbid(term_p || atom_p || index_p || split_p, "parameter");
        app = rule::EqLeft1{need(tpl_p, "tpl"), need(r_p, "r"), need(s_p, "s")};
        break;
      case RuleKind::EqLeft2:
        forbid(term_p || atom_p || index_p || split_p, "parameter");
        app = rule::EqLeft2{need(tpl_p, "tpl"), need(r_p, "r"), need(s_p, "s")};
        break;
      case RuleKind::Cng:
        forbid(term_p || atom_p || index_p, "parameter");
        app = rule::Cng{need(tpl_p, "tpl"), need(r_p, "r"), need(s_p, "s"), need(split_p, "split")};
        break;
      case RuleKind::CngShared:
        forbid(term_p || atom_p || index_p || split_p, "parameter");
        app = rule::CngShared{need(tpl_p, "tpl"), need(r_p, "r"), need(s_p, "s")};
        break;
    }
    return Derivation(std::move(*conclusion), std::move(app), std::move(premises));
  }

 private:
  void check_function(const std::string& name, std::size_t arity, const SExpr& at) const {
    if (!sig_.has_function(name)) {
      if (sig_.has_predicate(name))
        throw Error(ErrorKind::UnknownSymbol, "predicate '" + name + "' used as a term", at.offset);
      throw Error(ErrorKind::UnknownSymbol, "unknown function symbol '" + name + "'", at.offset);
    }
    int expected = sig_.function_arity(name);
    if (static_cast<std::size_t>(expected) != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "'" + name + "' expects " + std::to_string(expected) + " argument(s), got " + std::to_string(arity),
                  at.offset);
  }

  void check_predicate(const std::string& name, std::size_t arity, const SExpr& at) const {
    if (!sig_.has_predicate(name))
      throw Error(ErrorKind::UnknownSymbol, "unknown predicate symbol '" + name + "'", at.offset);
    int expected = sig_.predicate_arity(name);
    if (static_cast<std::size_t>(expected) != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "'" + name + "' expects " + std::to_string(expected) + " argument(s), got " + std::to_string(arity),
                  at.offset);
  }

  // Validates the atom skeleton; holes are only admitted for templates.
  Template atom_shape(const SExpr& e, bool holes) const {
    Template t;
    if (!e.is_list) {
      check_predicate(e.symbol, 0, e);
      t.kind = Atom::Kind::Predicate;
      t.name = e.symbol;
      return t;
    }
    if (e.items.empty() || e.items[0].is_list) syntax("expected an atom", e);
    const std::string& head = e.items[0].symbol;
    if (head == "=") {
      if (e.items.size() != 3) syntax("equality takes exactly two terms", e);
      t.kind = Atom::Kind::Equality;
    } else {
      if (e.items.size() < 2) syntax("nullary predicates are written bare", e);
      check_predicate(head, e.items.size() - 1, e);
      t.kind = Atom::Kind::Predicate;
      t.name = head;
    }
    for (std::size_t i = 1; i < e.items.size(); ++i)
      t.args.push_back(holes ? pattern(e.items[i]) : Pattern::from_term(term(e.items[i])));
    return t;
  }

  Atom atom_from(const SExpr& e) const {
    Atom a;
    const std::string& head = e.items[0].symbol;
    if (head == "=") return Atom::equality(term(e.items[1]), term(e.items[2]));
    a.kind = Atom::Kind::Predicate;
    a.name = head;
    for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(term(e.items[i]));
    return a;
  }

  static std::size_t number(const SExpr& e) {
    if (e.is_list || e.symbol.empty()) syntax("expected a number", e);
    std::size_t n = 0;
    for (char c : e.symbol) {
      if (c < '0' || c > '9') syntax("expected a number", e);
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  }

  const Signature& sig_;
};

std::string params(const Derivation& d) {
  struct Render {
    const Sequent& c;
    std::string operator()(const rule::Axiom&) const { return ""; }
    std::string operator()(const rule::Refl& r) const {
      if (c.succedent.is_equality() && c.succedent.lhs() == r.term) return "";
      return " (term " + to_sexpr(r.term) + ")";
    }
    std::string operator()(const rule::Weaken& w) const { return " (atom " + to_sexpr(w.introduced) + ")"; }
    std::string operator()(const rule::Exchange& x) const { return " (index " + std::to_string(x.index) + ")"; }
    std::string operator()(const rule::Contract&) const { return ""; }
    std::string operator()(const rule::Cut& x) const {
      return " (atom " + to_sexpr(x.formula) + ") (split " + std::to_string(x.split) + ")";
    }
    std::string operator()(const rule::CutShared& x) const { return " (atom " + to_sexpr(x.formula) + ")"; }
    static std::string eq(const Template& t, const Term& r, const Term& s) {
      return " (tpl " + to_sexpr(t) + ") (r " + to_sexpr(r) + ") (s " + to_sexpr(s) + ")";
    }
    std::string operator()(const rule::EqLeft1& x) const { return eq(x.tpl, x.r, x.s); }
    std::string operator()(const rule::EqLeft2& x) const { return eq(x.tpl, x.r, x.s); }
    std::string operator()(const rule::Cng& x) const {
      return eq(x.tpl, x.r, x.s) + " (split " + std::to_string(x.split) + ")";
    }
    std::string operator()(const rule::CngShared& x) const { return eq(x.tpl, x.r, x.s); }
  };
  return std::visit(Render{d.conclusion}, d.rule);
}

void serialize(const Derivation& d, std::size_t indent, std::string& out) {
  std::string pad(indent, ' ');
  out += pad + "(" + std::string(rule_name(d.kind())) + params(d);
  if (d.premises.empty()) {
    out += " " + to_sexpr(d.conclusion) + ")\n";
    return;
  }
  out += "\n";
  for (const auto& p : d.premises) serialize(p, indent + 2, out);
  out += pad + "  " + to_sexpr(d.conclusion) + ")\n";
}

}  // namespace

Derivation parse_derivation(std::string_view text, const Signature& sig) {
  auto exprs = read_sexprs(text);
  if (exprs.empty()) throw Error(ErrorKind::SyntaxError, "empty derivation file", 0);
  if (exprs.size() > 1) throw Error(ErrorKind::SyntaxError, "more than one top-level node", exprs[1].offset);
  return Decoder(sig).node(exprs[0]);
}

std::string serialize_derivation(const Derivation& d) {
  std::string out;
  serialize(d, 0, out);
  return out;
}

Sequent parse_sexpr_sequent(std::string_view text, const Signature& sig) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw Error(ErrorKind::SyntaxError, "expected one (seq ...) expression", 0);
  return Decoder(sig).sequent(exprs[0]);
}

namespace {

// Symbols gathered from atom and term positions of a derivation file.
struct SymbolCollector {
  std::vector<std::pair<std::string, int>> preds, funs;

  void term(const SExpr& e) {
    if (!e.is_list) {
      if (e.symbol != "_") funs.emplace_back(e.symbol, 0);
      return;
    }
    if (e.items.empty() || e.items[0].is_list) throw Error(ErrorKind::SyntaxError, "malformed term", e.offset);
    funs.emplace_back(e.items[0].symbol, static_cast<int>(e.items.size()) - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i) term(e.items[i]);
  }

  void atom(const SExpr& e) {
    if (!e.is_list) {
      preds.emplace_back(e.symbol, 0);
      return;
    }
    if (e.items.empty() || e.items[0].is_list) throw Error(ErrorKind::SyntaxError, "malformed atom", e.offset);
    if (!e.has_head("=")) preds.emplace_back(e.items[0].symbol, static_cast<int>(e.items.size()) - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i) term(e.items[i]);
  }

  void seq(const SExpr& x) {
    for (std::size_t j = 1; j < x.items.size(); ++j)
      if (!x.items[j].is_symbol("=>")) atom(x.items[j]);
  }

  // A bare (seq ...) is accepted too, for sequent files.
  void node(const SExpr& e) {
    if (!e.is_list) throw Error(ErrorKind::SyntaxError, "expected a rule application", e.offset);
    if (e.has_head("seq")) return seq(e);
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& x = e.items[i];
      if (x.has_head("seq")) {
        seq(x);
      } else if (x.has_head("atom") || x.has_head("tpl")) {
        for (std::size_t j = 1; j < x.items.size(); ++j) atom(x.items[j]);
      } else if (x.has_head("term") || x.has_head("r") || x.has_head("s")) {
        for (std::size_t j = 1; j < x.items.size(); ++j) term(x.items[j]);
      } else if (!x.has_head("index") && !x.has_head("split")) {
        node(x);
      }
    }
  }
};

}  // namespace

Signature infer_derivation_signature(std::string_view text) {
  SymbolCollector c;
  for (const auto& e : read_sexprs(text)) c.node(e);
  Signature sig;
  try {
    for (const auto& [name, arity] : c.preds) sig.add_predicate(name, arity);
    for (const auto& [name, arity] : c.funs) sig.add_function(name, arity);
  } catch (const Error& e) {
    throw Error(ErrorKind::SignatureError, e.message());
  }
  return sig;
}

}  // namespace eqc
