#include "eqcalc/fuzz.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include "eqcalc/congruence.hpp"
#include "eqcalc/kernel.hpp"
#include "eqcalc/transforms.hpp"

namespace eqc {

Signature default_fuzz_signature() {
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("b", 0);
  sig.add_function("f", 1);
  sig.add_function("g", 1);
  sig.add_predicate("P", 1);
  return sig;
}

namespace {

constexpr std::size_t kMaxAntecedent = 7;
constexpr std::size_t kMaxAtomDepth = 4;
constexpr std::size_t kPoolSize = 10;

std::size_t atom_depth(const Atom& a) {
  std::size_t d = 0;
  for (const auto& t : a.args) d = std::max(d, t.depth());
  return d;
}

void subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const auto& a : t.args) subterms(a, out);
}

Antecedent minus_one(Antecedent gamma, const Atom& a) {
  auto it = std::find(gamma.begin(), gamma.end(), a);
  if (it != gamma.end()) gamma.erase(it);
  return gamma;
}

class Generator {
 public:
  explicit Generator(const FuzzConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    universe_ = terms_up_to_depth(cfg.signature, cfg.max_term_depth);
    for (const auto& [name, arity] : cfg.signature.predicates()) predicates_.emplace_back(name, arity);
    for (std::size_t k = 0; k < kRuleKinds; ++k)
      weights_[k] = rule_enabled(static_cast<RuleKind>(k), cfg.calculus) ? std::max(0.0, cfg.weights[k]) : 0.0;
    // Leaves are always available.
    if (weights_[0] + weights_[1] <= 0) weights_[0] = 1;
  }

  Derivation run() {
    for (int i = 0; i < 3; ++i) pool_.push_back(leaf());
    if (cfg_.target_size <= 1) return pool_.front();
    std::size_t budget = 400 + 40 * cfg_.target_size;
    for (std::size_t step = 0; step < budget; ++step) {
      auto k = static_cast<RuleKind>(pick_rule());
      std::optional<Derivation> d = apply(k);
      if (!d || d->conclusion.antecedent.size() > kMaxAntecedent ||
          atom_depth(d->conclusion.succedent) > kMaxAtomDepth || !uses_enabled_rules(*d))
        continue;
      if (stats(*d).node_count >= cfg_.target_size) return *d;
      if (pool_.size() >= kPoolSize) pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(below(pool_.size())));
      pool_.push_back(std::move(*d));
    }
    return *std::max_element(pool_.begin(), pool_.end(), [](const Derivation& x, const Derivation& y) {
      return stats(x).node_count < stats(y).node_count;
    });
  }

 private:
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  std::size_t pick_rule() {
    double total = 0;
    for (double w : weights_) total += w;
    double x = unit() * total;
    for (std::size_t k = 0; k < kRuleKinds; ++k) {
      if (weights_[k] <= 0) continue;
      if (x < weights_[k]) return k;
      x -= weights_[k];
    }
    return 0;
  }

  Term term() {
    // Favour shallow terms.
    std::size_t n = universe_.size();
    std::size_t i = below(n);
    if (chance(0.5)) i = std::min(i, below(n));
    return universe_[i];
  }

  // A term seen somewhere in the pool, or a fresh one.
  Term pool_term() {
    if (chance(0.5)) {
      const Derivation& d = pool_[below(pool_.size())];
      std::vector<Term> subs;
      for (const auto& t : d.conclusion.succedent.args) subterms(t, subs);
      for (const auto& a : d.conclusion.antecedent)
        for (const auto& t : a.args) subterms(t, subs);
      if (!subs.empty()) return subs[below(subs.size())];
    }
    return term();
  }

  Atom atom() {
    if (!predicates_.empty() && chance(0.2)) {
      const auto& [name, arity] = predicates_[below(predicates_.size())];
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) args.push_back(term());
      return Atom::predicate(name, std::move(args));
    }
    Term l = term();
    if (chance(0.25)) return Atom::equality(l, l);
    return Atom::equality(l, term());
  }

  Atom pool_atom() {
    if (chance(0.6)) {
      const Derivation& d = pool_[below(pool_.size())];
      const Antecedent& g = d.conclusion.antecedent;
      if (!g.empty() && chance(0.5)) return g[below(g.size())];
      return d.conclusion.succedent;
    }
    return atom();
  }

  Derivation leaf() {
    double wa = weights_[0], wr = weights_[1];
    if (unit() * (wa + wr) < wr) {
      Term t = term();
      return Derivation(Sequent{{}, Atom::equality(t, t)}, rule::Refl{t});
    }
    Atom a = atom();
    return Derivation(Sequent{{a}, a}, rule::Axiom{});
  }

  // Alignment may introduce weakenings and exchanges.
  bool uses_enabled_rules(const Derivation& d) const {
    bool ok = true;
    for_each_node(d, [&](const Derivation& n) { ok = ok && rule_enabled(n.kind(), cfg_.calculus); });
    return ok;
  }

  const Derivation& any() { return pool_[below(pool_.size())]; }

  // Context for two context-sharing premises: a merge or a concatenation.
  Antecedent align(const Antecedent& g, const Antecedent& l) {
    Antecedent out = g;
    if (chance(0.4)) {
      out.insert(out.end(), l.begin(), l.end());
      return out;
    }
    std::map<Atom, int> have;
    for (const auto& a : g) ++have[a];
    for (const auto& a : l) {
      if (have[a] > 0) {
        --have[a];
      } else {
        out.push_back(a);
      }
    }
    return out;
  }

  // Template over h with holes at a random subset of the occurrences of r.
  Template choose_template(const Atom& h, const Term& r) {
    std::vector<Path> occ = occurrences(h, r);
    std::vector<Path> holes;
    for (const auto& p : occ)
      if (chance(0.75)) holes.push_back(p);
    if (holes.empty() && !occ.empty() && chance(0.8)) holes.push_back(occ[below(occ.size())]);
    return punch_holes(h, holes);
  }

  Term choose_r(const Atom& h) {
    std::vector<Term> subs;
    for (const auto& t : h.args) subterms(t, subs);
    if (!subs.empty() && chance(0.85)) return subs[below(subs.size())];
    return pool_term();
  }

  std::optional<Derivation> apply(RuleKind k) {
    switch (k) {
      case RuleKind::Axiom:
      case RuleKind::Refl: return leaf();
      case RuleKind::Weaken: return weaken(any(), pool_atom());
      case RuleKind::Exchange: {
        const Derivation& d = any();
        std::size_t n = d.conclusion.antecedent.size();
        if (n < 2) return std::nullopt;
        return exchange(d, below(n - 1));
      }
      case RuleKind::Contract: return contract();
      case RuleKind::Cut:
      case RuleKind::CutShared: return cut(k == RuleKind::CutShared);
      case RuleKind::EqLeft1:
      case RuleKind::EqLeft2: {
        const Derivation& d = any();
        const Atom& h = d.conclusion.succedent;
        Term r = choose_r(h);
        Term s = pool_term();
        Template tpl = choose_template(h, r);
        Sequent c = d.conclusion;
        c.antecedent.push_back(k == RuleKind::EqLeft1 ? Atom::equality(r, s) : Atom::equality(s, r));
        c.succedent = apply_template(tpl, s);
        if (k == RuleKind::EqLeft1) return Derivation(std::move(c), rule::EqLeft1{tpl, r, s}, {d});
        return Derivation(std::move(c), rule::EqLeft2{tpl, r, s}, {d});
      }
      case RuleKind::Cng:
      case RuleKind::CngShared: return congruence(k == RuleKind::CngShared);
    }
    return std::nullopt;
  }

  std::optional<Derivation> contract() {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      const Antecedent& g = pool_[i].conclusion.antecedent;
      for (std::size_t x = 0; x < g.size(); ++x)
        if (std::count(g.begin(), g.end(), g[x]) > 1) {
          candidates.push_back(i);
          break;
        }
    }
    if (candidates.empty()) return std::nullopt;
    const Derivation& d = pool_[candidates[below(candidates.size())]];
    const Antecedent& g = d.conclusion.antecedent;
    std::vector<Atom> dups;
    for (const auto& a : g)
      if (std::count(g.begin(), g.end(), a) > 1) dups.push_back(a);
    Atom f = dups[below(dups.size())];
    Antecedent target = minus_one(minus_one(g, f), f);
    target.push_back(f);
    target.push_back(f);
    Derivation moved = rearrange(d, target);
    Sequent c = moved.conclusion;
    c.antecedent.pop_back();
    return Derivation(std::move(c), rule::Contract{}, {std::move(moved)});
  }

  // Right premise for a cut on a: some pool derivation using a, moved last.
  Derivation user_of(const Atom& a) {
    std::vector<std::size_t> users;
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      const Antecedent& g = pool_[i].conclusion.antecedent;
      if (std::find(g.begin(), g.end(), a) != g.end()) users.push_back(i);
    }
    if (users.empty()) return weaken(any(), a);
    const Derivation& d = pool_[users[below(users.size())]];
    Antecedent target = minus_one(d.conclusion.antecedent, a);
    target.push_back(a);
    return rearrange(d, target);
  }

  std::optional<Derivation> cut(bool shared) {
    Derivation left = any();
    Atom a = left.conclusion.succedent;
    Derivation right = user_of(a);
    Antecedent delta(right.conclusion.antecedent.begin(), right.conclusion.antecedent.end() - 1);
    if (!shared) {
      Sequent c{left.conclusion.antecedent, right.conclusion.succedent};
      c.antecedent.insert(c.antecedent.end(), delta.begin(), delta.end());
      std::size_t split = left.conclusion.antecedent.size();
      return Derivation(std::move(c), rule::Cut{a, split}, {std::move(left), std::move(right)});
    }
    Antecedent ctx = align(left.conclusion.antecedent, delta);
    Antecedent with_a = ctx;
    with_a.push_back(a);
    if (with_a.size() > kMaxAntecedent) return std::nullopt;
    left = rearrange(std::move(left), ctx);
    right = rearrange(std::move(right), with_a);
    Sequent c{ctx, right.conclusion.succedent};
    return Derivation(std::move(c), rule::CutShared{a}, {std::move(left), std::move(right)});
  }

  std::optional<Derivation> congruence(bool shared) {
    Derivation left = any();
    const Atom& h = left.conclusion.succedent;
    // Prefer a pool equality whose left side occurs in h.
    std::vector<std::size_t> eqs;
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      const Atom& e = pool_[i].conclusion.succedent;
      if (e.is_equality() && !occurrences(h, e.lhs()).empty()) eqs.push_back(i);
    }
    Derivation right;
    if (!eqs.empty() && chance(0.7)) {
      right = pool_[eqs[below(eqs.size())]];
    } else {
      Atom e = Atom::equality(choose_r(h), pool_term());
      right = Derivation(Sequent{{e}, e}, rule::Axiom{});
    }
    Term r = right.conclusion.succedent.lhs();
    Term s = right.conclusion.succedent.rhs();
    Template tpl = choose_template(h, r);
    Atom out = apply_template(tpl, s);
    if (!shared) {
      Sequent c{left.conclusion.antecedent, out};
      c.antecedent.insert(c.antecedent.end(), right.conclusion.antecedent.begin(), right.conclusion.antecedent.end());
      std::size_t split = left.conclusion.antecedent.size();
      return Derivation(std::move(c), rule::Cng{tpl, r, s, split}, {std::move(left), std::move(right)});
    }
    Antecedent ctx = align(left.conclusion.antecedent, right.conclusion.antecedent);
    if (ctx.size() > kMaxAntecedent) return std::nullopt;
    left = rearrange(std::move(left), ctx);
    right = rearrange(std::move(right), ctx);
    return Derivation(Sequent{ctx, out}, rule::CngShared{tpl, r, s}, {std::move(left), std::move(right)});
  }

  const FuzzConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Term> universe_;
  std::vector<std::pair<std::string, int>> predicates_;
  std::array<double, kRuleKinds> weights_{};
  std::vector<Derivation> pool_;
};

}  // namespace

Derivation fuzz_derivation(const FuzzConfig& cfg) { return Generator(cfg).run(); }

}  // namespace eqc
