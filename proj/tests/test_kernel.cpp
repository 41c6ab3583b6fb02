#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "eqcalc/kernel.hpp"
#include "support.hpp"

using namespace eqc;
using namespace eqc::test;

namespace {

Template Tpl(const std::string& sexpr) {
  // Reuse the derivation reader to decode a template with holes.
  auto d = parse_derivation("(eq-left-1 (tpl " + sexpr + ") (r a) (s a) (axiom (seq (= a a) => (= a a))) (seq => (= a a)))",
                            rich_signature());
  return std::get<rule::EqLeft1>(d.rule).tpl;
}

Derivation leaf_axiom(const Atom& a) { return Derivation(Sequent{{a}, a}, rule::Axiom{}); }

// Brute force: every way of turning a set of pairwise disjoint positions of
// `premise` into holes, kept when the two substitutions reproduce the atoms.
std::set<Template> brute_force_templates(const Atom& premise, const Atom& conclusion, const Term& r, const Term& s) {
  std::vector<Path> positions;
  std::function<void(const Term&, Path&)> walk = [&](const Term& t, Path& p) {
    positions.push_back(p);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      p.push_back(i);
      walk(t.args[i], p);
      p.pop_back();
    }
  };
  for (std::size_t i = 0; i < premise.args.size(); ++i) {
    Path p{i};
    walk(premise.args[i], p);
  }
  auto is_prefix = [](const Path& a, const Path& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  };
  std::function<Pattern(const Term&, Path&, const std::vector<Path>&)> punch =
      [&](const Term& t, Path& p, const std::vector<Path>& holes) -> Pattern {
    if (std::find(holes.begin(), holes.end(), p) != holes.end()) return Pattern::hole();
    Pattern out{t.head, {}};
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      p.push_back(i);
      out.args.push_back(punch(t.args[i], p, holes));
      p.pop_back();
    }
    return out;
  };
  std::set<Template> out;
  REQUIRE(positions.size() <= 16);
  for (std::uint32_t mask = 0; mask < (1u << positions.size()); ++mask) {
    std::vector<Path> holes;
    for (std::size_t i = 0; i < positions.size(); ++i)
      if (mask & (1u << i)) holes.push_back(positions[i]);
    bool antichain = true;
    for (std::size_t i = 0; i < holes.size() && antichain; ++i)
      for (std::size_t j = 0; j < holes.size() && antichain; ++j)
        if (i != j && is_prefix(holes[i], holes[j])) antichain = false;
    if (!antichain) continue;
    Template tpl;
    tpl.kind = premise.kind;
    tpl.name = premise.name;
    for (std::size_t i = 0; i < premise.args.size(); ++i) {
      Path p{i};
      tpl.args.push_back(punch(premise.args[i], p, holes));
    }
    if (apply_template(tpl, r) == premise && apply_template(tpl, s) == conclusion) out.insert(tpl);
  }
  if (premise.kind != conclusion.kind || premise.name != conclusion.name) out.clear();
  return out;
}

Term random_term(std::mt19937_64& rng, int depth) {
  static const char* consts[] = {"a", "b"};
  static const char* funs[] = {"f", "g"};
  if (depth == 0 || rng() % 3 == 0) return Term(consts[rng() % 2]);
  return Term(funs[rng() % 2], {random_term(rng, depth - 1)});
}

std::size_t atom_nodes(const Atom& a) {
  std::size_t n = 0;
  for (const auto& t : a.args) n += t.size();
  return n;
}

}  // namespace

TEST_CASE("apply_template") {
  CHECK(apply_template(Tpl("(= a (f _))"), T("a")) == A("a=f(a)"));
  CHECK(apply_template(Tpl("(= a (f _))"), T("f(a)")) == A("a=f(f(a))"));
  CHECK(apply_template(Tpl("(P a)"), T("f(b)")) == A("P(a)"));
  CHECK(apply_template(Tpl("(= _ (g _))"), T("b")) == A("b=g(b)"));
  CHECK(Tpl("(= _ (g _))").hole_paths() == std::vector<Path>{{0}, {1, 0}});
  CHECK(Tpl("(P a)").hole_count() == 0);
}

TEST_CASE("match_replacement examples") {
  auto m = match_replacement(A("a=f(a)"), A("a=f(f(a))"), T("a"), T("f(a)"));
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Tpl("(= a (f _))"));

  auto id = match_replacement(A("a=f(a)"), A("a=f(a)"), T("a"), T("b"));
  REQUIRE(id.size() == 1);
  CHECK(id[0] == Template::from_atom(A("a=f(a)")));

  // r = s = a: holes may sit at any subset of the a-positions.
  auto same = match_replacement(A("a=f(a)"), A("a=f(a)"), T("a"), T("a"));
  CHECK(same.size() == 4);

  CHECK(match_replacement(A("a=f(a)"), A("f(a)=a"), T("a"), T("f(a)")).empty());
  CHECK(match_replacement(A("P(a)"), A("a=a"), T("a"), T("a")).empty());
  CHECK(brute_force_templates(A("a=f(a)"), A("f(a)=a"), T("a"), T("f(a)")).empty());
}

TEST_CASE("match_replacement agrees with brute-force enumeration") {
  std::mt19937_64 rng(7);
  int nonempty = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Atom p = Atom::equality(random_term(rng, 3), random_term(rng, 3));
    if (rng() % 5 == 0) p = Atom::predicate("P", {random_term(rng, 3)});
    if (atom_nodes(p) > 8) continue;
    Term r = random_term(rng, 1);
    Term s = random_term(rng, 1);
    // Usually derive the conclusion from a genuine replacement so matches exist.
    Atom c = p;
    if (rng() % 4 != 0) {
      auto all = brute_force_templates(p, p, r, r);
      std::vector<Template> v(all.begin(), all.end());
      c = apply_template(v[rng() % v.size()], s);
    } else {
      c = Atom::equality(random_term(rng, 2), random_term(rng, 2));
    }
    auto got = match_replacement(p, c, r, s);
    std::set<Template> got_set(got.begin(), got.end());
    CHECK(got_set.size() == got.size());
    CHECK(got_set == brute_force_templates(p, c, r, s));
    for (const auto& tpl : got) {
      CHECK(apply_template(tpl, r) == p);
      CHECK(apply_template(tpl, s) == c);
    }
    // The hole-free template always relates an atom to itself.
    auto self = match_replacement(p, p, r, s);
    CHECK(std::find(self.begin(), self.end(), Template::from_atom(p)) != self.end());
    nonempty += !got.empty();
  }
  CHECK(nonempty > 1000);
}

TEST_CASE("calculus presets decode") {
  Calculus eqm = Calculus::eqm();
  CHECK(eqm.eq_mechanism == EqMechanism::EqLeftPair);
  CHECK(eqm.cut == CutMode::IndependentAtomic);
  CHECK(eqm.contraction_allowed);
  CHECK(eqm.weakening_allowed);
  CHECK(eqm.exchange_allowed);
  CHECK(!Calculus::eqm_minus().contraction_allowed);
  CHECK(Calculus::eq().eq_mechanism == EqMechanism::Cng);
  CHECK(Calculus::eqp().eq_mechanism == EqMechanism::CngShared);
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  CHECK(ccf.cut == CutMode::None);
  CHECK(!ccf.contraction_allowed);
  CHECK(Calculus::shared_cut(eqm).cut == CutMode::ContextSharing);

  for (const auto& name : preset_names()) {
    auto c = Calculus::from_name(name);
    REQUIRE(c);
    CHECK(c->name() == name);
  }
  CHECK(*Calculus::from_name("EQM-") == Calculus::eqm_minus());
  CHECK(*Calculus::from_name("CCF-EQP") == ccf);
  CHECK(*Calculus::from_name("CF-EQM") == Calculus::cf(eqm));
  CHECK(*Calculus::from_name("EQM+shared-cut") == Calculus::shared_cut(eqm));
  CHECK(!Calculus::from_name("CF-EQM+shared-cut"));
  CHECK(!Calculus::from_name("CCF-EQM-"));
  CHECK(!Calculus::from_name("EQX"));
}

TEST_CASE("check_rule examples") {
  Sequent axiom_seq = S("a=f(a) => a=f(a)");
  Sequent doubled = S("a=f(a), a=f(a) => a=f(f(a))");
  rule::EqLeft1 step{Tpl("(= a (f _))"), T("a"), T("f(a)")};
  CHECK(!check_rule(doubled, step, std::vector<Sequent>{axiom_seq}, Calculus::eqm()));

  auto v = check_rule(S("a=f(a) => a=f(f(a))"), rule::Contract{}, std::vector<Sequent>{doubled},
                      Calculus::eqm_minus());
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::RuleDisabledInCalculus);
  CHECK(!check_rule(S("a=f(a) => a=f(f(a))"), rule::Contract{}, std::vector<Sequent>{doubled}, Calculus::eqm()));

  // Shared cut: premises G,F => F and G,F,F => H conclude G,F => H, nothing else.
  Calculus shared = Calculus::shared_cut(Calculus::eqm());
  std::vector<Sequent> prem{S("b=b, a=b => a=b"), S("b=b, a=b, a=b => P(a)")};
  CHECK(!check_rule(S("b=b, a=b => P(a)"), rule::CutShared{A("a=b")}, prem, shared));
  auto bad = check_rule(S("b=b => P(a)"), rule::CutShared{A("a=b")}, prem, shared);
  REQUIRE(bad);
  CHECK(bad->kind == ViolationKind::ShapeMismatch);
  auto off = check_rule(S("b=b, a=b => P(a)"), rule::CutShared{A("a=b")}, prem, Calculus::eqm());
  REQUIRE(off);
  CHECK(off->kind == ViolationKind::RuleDisabledInCalculus);
}

TEST_CASE("check_rule: each figure") {
  Calculus eqm = Calculus::eqm();
  auto ok = [](const Sequent& c, const RuleApp& r, std::vector<Sequent> p, const Calculus& calc) {
    return !check_rule(c, r, p, calc);
  };
  CHECK(ok(S("P(a) => P(a)"), rule::Axiom{}, {}, eqm));
  CHECK(!ok(S("P(a), a=a => P(a)"), rule::Axiom{}, {}, eqm));
  CHECK(ok(S("=> f(a)=f(a)"), rule::Refl{T("f(a)")}, {}, eqm));
  CHECK(!ok(S("=> f(a)=a"), rule::Refl{T("f(a)")}, {}, eqm));
  CHECK(!ok(S("b=b => a=a"), rule::Refl{T("a")}, {}, eqm));

  // Weakening appends on the right and keeps the succedent.
  CHECK(ok(S("a=b, P(c) => a=b"), rule::Weaken{A("P(c)")}, {S("a=b => a=b")}, eqm));
  CHECK(!ok(S("P(c), a=b => a=b"), rule::Weaken{A("P(c)")}, {S("a=b => a=b")}, eqm));
  CHECK(!ok(S("a=b, P(c) => P(c)"), rule::Weaken{A("P(c)")}, {S("a=b => a=b")}, eqm));

  CHECK(ok(S("b=b, a=a, P(c) => Q"), rule::Exchange{0}, {S("a=a, b=b, P(c) => Q")}, eqm));
  CHECK(!ok(S("b=b, a=a, P(c) => Q"), rule::Exchange{1}, {S("a=a, b=b, P(c) => Q")}, eqm));
  CHECK(!ok(S("a=a, b=b => Q"), rule::Exchange{1}, {S("a=a, b=b => Q")}, eqm));

  CHECK(ok(S("Q, P(a) => Q"), rule::Contract{}, {S("Q, P(a), P(a) => Q")}, eqm));
  CHECK(!ok(S("Q, P(a) => Q"), rule::Contract{}, {S("P(a), Q, P(a) => Q")}, eqm));

  // Cut: G => A and L,A => H give G,L => H.
  CHECK(ok(S("a=b, P(a) => P(b)"), rule::Cut{A("a=b"), 1}, {S("a=b => a=b"), S("P(a), a=b => P(b)")}, eqm));
  CHECK(!ok(S("a=b, P(a) => P(b)"), rule::Cut{A("a=b"), 0}, {S("a=b => a=b"), S("P(a), a=b => P(b)")}, eqm));
  CHECK(!ok(S("a=b, P(a) => P(b)"), rule::Cut{A("a=b"), 1},
            {S("a=b => a=b"), S("P(a), a=b => P(b)")}, Calculus::cf(eqm)));

  // Equality rules.
  rule::EqLeft2 e2{Tpl("(P _)"), T("a"), T("b")};
  CHECK(ok(S("P(a), b=a => P(b)"), e2, {S("P(a) => P(a)")}, eqm));
  CHECK(!ok(S("P(a), a=b => P(b)"), e2, {S("P(a) => P(a)")}, eqm));
  auto tv = check_rule(S("P(a), b=a => P(a)"), e2, std::vector<Sequent>{S("P(a) => P(a)")}, eqm);
  REQUIRE(tv);
  CHECK(tv->kind == ViolationKind::TemplateMismatch);
  CHECK(!ok(S("P(a), b=a => P(b)"), e2, {S("P(a) => P(a)")}, Calculus::eq()));

  rule::Cng cng{Tpl("(P _)"), T("a"), T("b"), 1};
  CHECK(ok(S("P(a), a=b => P(b)"), cng, {S("P(a) => P(a)"), S("a=b => a=b")}, Calculus::eq()));
  CHECK(!ok(S("P(a), a=b => P(b)"), cng, {S("P(a) => P(a)"), S("a=b => a=b")}, Calculus::eqp()));
  CHECK(!ok(S("P(a), a=b => P(b)"), cng, {S("P(a) => P(a)"), S("a=b => b=a")}, Calculus::eq()));

  rule::CngShared cs{Tpl("(P _)"), T("a"), T("b")};
  CHECK(ok(S("P(a), a=b => P(b)"), cs, {S("P(a), a=b => P(a)"), S("P(a), a=b => a=b")}, Calculus::eqp()));
  CHECK(!ok(S("P(a), a=b => P(b)"), cs, {S("P(a) => P(a)"), S("P(a), a=b => a=b")}, Calculus::eqp()));

  auto count = check_rule(S("P(a) => P(a)"), rule::Axiom{}, std::vector<Sequent>{S("P(a) => P(a)")}, eqm);
  REQUIRE(count);
  CHECK(count->kind == ViolationKind::PremiseCountMismatch);
}

TEST_CASE("check_derivation on the 3-node fixture") {
  Derivation d = contraction_fixture();
  CheckReport r = check_derivation(d, Calculus::eqm());
  CHECK(r.ok);
  CHECK(r.stats.height == 2);
  CHECK(r.stats.contraction_count == 1);
  CHECK(r.stats.node_count == 3);

  CheckReport minus = check_derivation(d, Calculus::eqm_minus());
  CHECK(!minus.ok);
  REQUIRE(minus.violations.size() == 1);
  CHECK(minus.violations[0].path.empty());
  CHECK(minus.violations[0].kind == ViolationKind::RuleDisabledInCalculus);

  // Under EQ the equality step is the offender instead.
  CheckReport eq = check_derivation(d, Calculus::eq());
  REQUIRE(eq.violations.size() == 1);
  CHECK(to_string(eq.violations[0].path) == "0");
}

TEST_CASE("check_derivation on a single refl node") {
  Derivation d(S("=> f(a)=f(a)"), rule::Refl{T("f(a)")});
  for (const auto& name : preset_names()) {
    CheckReport r = check_derivation(d, *Calculus::from_name(name));
    CHECK(r.ok);
    CHECK(r.stats.height == 0);
  }
}

TEST_CASE("stats") {
  Derivation leaf = leaf_axiom(A("P(a)"));
  CHECK(stats(leaf).height == 0);
  CHECK(stats(leaf).node_count == 1);
  Derivation w(S("P(a), Q => P(a)"), rule::Weaken{A("Q")}, {leaf});
  Derivation cut(S("P(a), Q => P(a)"), rule::CutShared{A("P(a)")}, {w, Derivation(S("P(a), Q, P(a) => P(a)"), rule::Weaken{A("P(a)")}, {w})});
  DerivationStats s = stats(cut);
  CHECK(s.height == 3);
  CHECK(s.node_count == 6);
  CHECK(s.weakening_count == 3);
  CHECK(s.cut_count == 1);
}
