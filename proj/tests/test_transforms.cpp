#include <doctest.h>

#include <algorithm>
#include <random>

#include "eqcalc/error.hpp"
#include "eqcalc/kernel.hpp"
#include "eqcalc/transforms.hpp"
#include "support.hpp"

using namespace eqc;
using namespace eqc::test;

namespace {

Derivation ax(const char* atom) {
  Atom a = A(atom);
  return Derivation(Sequent{{a}, a}, rule::Axiom{});
}

Derivation rf(const char* term) {
  Term t = T(term);
  return Derivation(Sequent{{}, Atom::equality(t, t)}, rule::Refl{t});
}

// An unchecked leaf standing for an open premise.
Derivation open_premise(const char* seq) { return Derivation(S(seq), rule::Axiom{}); }

std::size_t count_kind(const Derivation& d, RuleKind k) {
  std::size_t n = 0;
  for_each_node(d, [&](const Derivation& x) { n += x.kind() == k; });
  return n;
}

bool equalities_everywhere(const Derivation& d) {
  bool ok = true;
  for_each_node(d, [&](const Derivation& x) {
    ok = ok && x.conclusion.succedent.is_equality();
    for (const auto& a : x.conclusion.antecedent) ok = ok && a.is_equality();
  });
  return ok;
}

// Checks every node except the open premises (leaves whose conclusion is given).
bool new_nodes_check(const Derivation& d, const Calculus& calc, const Derivation& open) {
  if (d == open) return true;
  std::vector<Sequent> ps;
  for (const auto& p : d.premises) ps.push_back(p.conclusion);
  if (check_rule(d.conclusion, d.rule, ps, calc)) return false;
  return std::all_of(d.premises.begin(), d.premises.end(),
                     [&](const Derivation& p) { return new_nodes_check(p, calc, open); });
}

// The duplicated-hypothesis derivation of the 3-node fixture's sequent in cf.EQ'.
Derivation doubled_cng_shared() {
  Derivation twice = weaken(ax("a=f(a)"), A("a=f(a)"));
  return Derivation(S("a=f(a), a=f(a) => a=f(f(a))"), rule::CngShared{punch_holes(A("a=f(a)"), {{1, 0}}), T("a"), T("f(a)")},
                    {twice, twice});
}

Template tpl_a_f_hole() { return punch_holes(A("a=f(a)"), {{1, 0}}); }

}  // namespace

TEST_CASE("rearrange uses weakenings then adjacent exchanges") {
  Derivation d = ax("P(a)");
  Derivation r = rearrange(d, G({"a=b", "P(a)", "Q"}));
  CHECK(r.conclusion == S("a=b, P(a), Q => P(a)"));
  CHECK(checks(r, Calculus::ccf(Calculus::eqp())));
  CHECK(stats(r).weakening_count == 2);
  CHECK(count_kind(r, RuleKind::Exchange) == 1);
  CHECK(rearrange(d, G({"P(a)"})) == d);

  Derivation dup = rearrange(ax("Q"), G({"Q", "a=a", "Q"}));
  CHECK(dup.conclusion.antecedent == G({"Q", "a=a", "Q"}));
  CHECK(checks(dup, Calculus::eqm_minus()));
  CHECK_THROWS_AS(rearrange(d, G({"Q"})), Error);
}

TEST_CASE("eqleft_as_cng kind 1") {
  Derivation open = open_premise("=> a=f(a)");
  Derivation frag = eqleft_as_cng(1, tpl_a_f_hole(), T("a"), T("f(a)"), open);
  CHECK(frag.conclusion == S("a=f(a) => a=f(f(a))"));
  CHECK(stats(frag).node_count - 1 == 2);
  CHECK(frag.kind() == RuleKind::Cng);
  CHECK(frag.premises[1] == ax("a=f(a)"));
  CHECK(new_nodes_check(frag, Calculus::cf(Calculus::eq()), open));

  // Closed instance: a=f(a), a=f(a) => a=f(f(a)) in EQ.
  Derivation closed = eqleft_as_cng(1, tpl_a_f_hole(), T("a"), T("f(a)"), ax("a=f(a)"));
  CHECK(closed.conclusion == S("a=f(a), a=f(a) => a=f(f(a))"));
  CheckReport r = check_derivation(closed, Calculus::cf(Calculus::eq()));
  CHECK(r.ok);
  CHECK(r.stats.contraction_count == 0);
  CHECK(r.stats.cut_count == 0);
}

TEST_CASE("eqleft_as_cng kind 2") {
  Derivation open = open_premise("=> a=f(a)");
  Derivation frag = eqleft_as_cng(2, tpl_a_f_hole(), T("a"), T("f(a)"), open);
  CHECK(frag.conclusion == S("f(a)=a => a=f(f(a))"));
  CHECK(stats(frag).node_count - 1 == 4);
  const Derivation& flip = frag.premises[1];
  CHECK(flip.conclusion == S("f(a)=a => a=f(a)"));
  CHECK(flip.premises[0] == rf("f(a)"));
  CHECK(flip.premises[1] == ax("f(a)=a"));
  CHECK(new_nodes_check(frag, Calculus::cf(Calculus::eq()), open));
}

TEST_CASE("eqleft_as_cng with a hole-free template") {
  Derivation frag = eqleft_as_cng(1, Template::from_atom(A("P(b)")), T("a"), T("c"), ax("P(b)"));
  CHECK(frag.conclusion == S("P(b), a=c => P(b)"));
  CHECK(checks(frag, Calculus::eq()));
}

TEST_CASE("cng_as_eqm") {
  Derivation open = open_premise("=> a=f(a)");
  Derivation frag = cng_as_eqm(tpl_a_f_hole(), T("a"), T("f(a)"), open, ax("a=f(a)"));
  CHECK(frag.conclusion == S("a=f(a) => a=f(f(a))"));
  CHECK(frag.kind() == RuleKind::Cut);
  CHECK(count_kind(frag, RuleKind::EqLeft1) == 1);
  CHECK(count_kind(frag, RuleKind::Cut) == 1);
  CHECK(count_kind(frag, RuleKind::Contract) == 0);
  CHECK(new_nodes_check(frag, Calculus::eqm(), open));

  // Empty right context.
  Derivation empty = cng_as_eqm(punch_holes(A("f(a)=f(a)"), {{1, 0}}), T("a"), T("a"), rf("f(a)"), rf("a"));
  CHECK(empty.conclusion == S("=> f(a)=f(a)"));
  CHECK(checks(empty, Calculus::eqm()));

  // Closed instance with both contexts nonempty: the cut result is reordered.
  Derivation left = weaken(rf("f(a)"), A("P(b)"));
  Derivation both = cng_as_eqm(punch_holes(A("f(a)=f(a)"), {{1, 0}}), T("a"), T("f(a)"), left, ax("a=f(a)"));
  CHECK(both.conclusion == S("P(b), a=f(a) => f(a)=f(f(a))"));
  CheckReport r = check_derivation(both, Calculus::eqm());
  CHECK(r.ok);
  CHECK(r.stats.contraction_count == 0);
}

TEST_CASE("translate the 3-node fixture into EQ") {
  Derivation d = contraction_fixture();
  TransformOutcome out = translate(d, Calculus::eq());
  CHECK(out.result.conclusion == d.conclusion);
  CHECK(out.certificate.end_sequent_preserved);
  CHECK(out.certificate.source == Calculus::eqm());
  CheckReport r = check_derivation(out.result, Calculus::eq());
  CHECK(r.ok);
  CHECK(r.stats.contraction_count == 1);

  TransformOutcome back = translate(out.result, Calculus::eqm());
  CHECK(checks(back.result, Calculus::eqm()));
  CHECK(stats(back.result).contraction_count == 1);

  CHECK(translate(ax("a=b"), Calculus::eq()).result == ax("a=b"));
  CHECK_THROWS_AS(translate(d, Calculus::eqm()), Error);
}

TEST_CASE("translate fuzzed EQ_M- derivations both ways") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(Calculus::eqm_minus(), seed, 14));
    REQUIRE(checks(d, Calculus::eqm_minus()));
    Derivation e = translate(d, Calculus::eq()).result;
    CHECK(checks(e, Calculus::eq()));
    CHECK(e.conclusion == d.conclusion);
    CHECK(stats(e).contraction_count == 0);
    Derivation m = translate(e, Calculus::eqm()).result;
    CHECK(checks(m, Calculus::eqm_minus()));
    CHECK(m.conclusion == d.conclusion);
  }
}

TEST_CASE("project_equalities examples") {
  Derivation w = weaken(ax("a=f(a)"), A("P(a)"));
  Derivation d = exchange(w, 0);
  CHECK(d.conclusion == S("P(a), a=f(a) => a=f(a)"));
  TransformOutcome out = project_equalities(d, Calculus::eqm_minus());
  CHECK(out.result == ax("a=f(a)"));

  Derivation eq_only = weaken(ax("a=b"), A("b=b"));
  CHECK(project_equalities(eq_only, Calculus::eqm()).result.conclusion == eq_only.conclusion);

  // A cut on a predicate atom is bypassed.
  Derivation right = weaken(ax("a=b"), A("P(a)"));
  Derivation cut(S("P(a), a=b => a=b"), rule::Cut{A("P(a)"), 1}, {ax("P(a)"), right});
  REQUIRE(checks(cut, Calculus::eqm_minus()));
  Derivation p = project_equalities(cut, Calculus::eqm_minus()).result;
  CHECK(p.conclusion == S("a=b => a=b"));
  CHECK(count_kind(p, RuleKind::Cut) == 0);

  // An equality cut is kept.
  Derivation user = weaken(weaken(ax("b=c"), A("P(a)")), A("a=b"));
  Derivation eqcut(S("a=b, b=c, P(a) => b=c"), rule::Cut{A("a=b"), 1}, {ax("a=b"), user});
  REQUIRE(checks(eqcut, Calculus::eqm()));
  Derivation kept = project_equalities(eqcut, Calculus::eqm()).result;
  CHECK(kept.conclusion == S("a=b, b=c => b=c"));
  CHECK(kept.kind() == RuleKind::Cut);

  Derivation pred = exchange(weaken(ax("P(b)"), A("a=b")), 0);
  try {
    project_equalities(pred, Calculus::eqm());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SuccedentNotEquality);
  }
  CHECK_THROWS_AS(project_equalities(contraction_fixture(), Calculus::eqm_minus()), Error);
}

TEST_CASE("project_equalities over fuzzed EQ_M derivations") {
  int tried = 0;
  for (std::uint64_t seed = 1; tried < 200; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(Calculus::eqm(), seed, 12));
    if (!d.conclusion.succedent.is_equality()) continue;
    ++tried;
    TransformOutcome out = project_equalities(d, Calculus::eqm());
    CHECK(checks(out.result, Calculus::eqm()));
    CHECK(equalities_everywhere(out.result));
    CHECK(out.result.conclusion == Sequent{equalities_only(d.conclusion.antecedent), d.conclusion.succedent});
    CHECK(stats(out.result).contraction_count <= stats(d).contraction_count);
  }
}

TEST_CASE("filter_last") {
  CHECK(filter_last(G({"Q", "P(a)", "Q"}), A("Q")) == G({"P(a)", "Q"}));
  CHECK(filter_last(G({"P(a)", "P(b)"}), A("Q")) == G({"P(a)", "P(b)"}));
  CHECK(filter_last(G({"Q", "Q", "Q"}), A("Q")) == G({"Q"}));

  std::mt19937_64 rng(3);
  const char* pool[] = {"Q", "P(a)", "a=b", "b=b"};
  for (int i = 0; i < 500; ++i) {
    Antecedent g;
    for (std::size_t n = rng() % 7; n > 0; --n) g.push_back(A(pool[rng() % 4]));
    Atom f = A(pool[rng() % 4]);
    Antecedent once = filter_last(g, f);
    CHECK(filter_last(once, f) == once);
    CHECK(once.size() <= g.size());
    CHECK(std::count(once.begin(), once.end(), f) == std::min<std::ptrdiff_t>(1, std::count(g.begin(), g.end(), f)));
  }
}

TEST_CASE("keep_last cases") {
  CHECK(keep_last(ax("Q"), A("Q")).result == ax("Q"));

  Derivation fresh = weaken(ax("P(a)"), A("Q"));
  CHECK(keep_last(fresh, A("Q")).result == fresh);

  // Weakening by F when F occurs earlier: the surviving F is moved last.
  Derivation twice = weaken(exchange(weaken(ax("Q"), A("P(a)")), 0), A("Q"));
  CHECK(twice.conclusion == S("P(a), Q, Q => Q"));
  Derivation squeezed = keep_last(twice, A("Q")).result;
  CHECK(squeezed.conclusion == S("P(a), Q => Q"));

  Derivation mid = weaken(weaken(ax("Q"), A("P(a)")), A("Q"));
  CHECK(mid.conclusion == S("Q, P(a), Q => Q"));
  CHECK(keep_last(mid, A("Q")).result.conclusion == S("P(a), Q => Q"));

  // Exchange of a non-last F is swallowed.
  Derivation ex = exchange(mid, 0);
  CHECK(ex.conclusion == S("P(a), Q, Q => Q"));
  CHECK(keep_last(ex, A("Q")).result.conclusion == S("P(a), Q => Q"));

  // Context-sharing congruence passes through.
  Derivation cs = doubled_cng_shared();
  TransformOutcome out = keep_last(cs, A("a=f(a)"));
  CHECK(out.result.kind() == RuleKind::CngShared);
  CHECK(out.result.conclusion == S("a=f(a) => a=f(f(a))"));

  CHECK_THROWS_AS(keep_last(contraction_fixture(), A("a=f(a)")), Error);
}

TEST_CASE("admit_contraction") {
  Derivation ff = weaken(ax("Q"), A("Q"));
  Derivation out = admit_contraction(ff).result;
  CHECK(out == ax("Q"));

  TransformOutcome example = admit_contraction(doubled_cng_shared());
  CHECK(example.result.conclusion == S("a=f(a) => a=f(f(a))"));
  CHECK(checks(example.result, Calculus::ccf(Calculus::eqp())));

  CHECK_THROWS_AS(admit_contraction(ax("Q")), Error);
}

TEST_CASE("saturate") {
  Derivation f = ax("Q");
  Derivation s = saturate(f, G({"P(a)", "Q"})).result;
  CHECK(s.conclusion == S("P(a), Q => Q"));
  CHECK(stats(s).weakening_count == 1);
  CHECK(count_kind(s, RuleKind::Exchange) == 1);

  Derivation fgf = weaken(weaken(ax("Q"), A("P(a)")), A("Q"));
  CHECK(fgf.conclusion == S("Q, P(a), Q => Q"));
  Derivation r = saturate(fgf, G({"Q", "P(a)"})).result;
  CHECK(r.conclusion == S("Q, P(a) => Q"));
  CHECK(checks(r, Calculus::ccf(Calculus::eqp())));

  CHECK(saturate(fgf, fgf.conclusion.antecedent).result.conclusion == fgf.conclusion);
  try {
    saturate(fgf, G({"Q"}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
  }
}

TEST_CASE("eliminate_contractions") {
  Derivation free = doubled_cng_shared();
  CHECK(eliminate_contractions(free).result == free);

  Derivation d(S("a=f(a) => a=f(f(a))"), rule::Contract{}, {doubled_cng_shared()});
  REQUIRE(checks(d, Calculus::cf(Calculus::eqp())));
  TransformOutcome out = eliminate_contractions(d);
  CHECK(out.result.conclusion == S("a=f(a) => a=f(f(a))"));
  CheckReport r = check_derivation(out.result, Calculus::ccf(Calculus::eqp()));
  CHECK(r.ok);
  CHECK(r.stats.contraction_count == 0);
  CHECK(out.certificate.target == Calculus::ccf(Calculus::eqp()));

  int with_contraction = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Derivation x = fuzz_derivation(fuzz_config(Calculus::cf(Calculus::eqp()), seed, 14));
    with_contraction += stats(x).contraction_count > 0;
    Derivation y = eliminate_contractions(x).result;
    CHECK(y.conclusion == x.conclusion);
    CheckReport rr = check_derivation(y, Calculus::ccf(Calculus::eqp()));
    CHECK(rr.ok);
    CHECK(rr.stats.contraction_count == 0);
    CHECK(rr.stats.cut_count == 0);
  }
  CHECK(with_contraction > 30);
}

TEST_CASE("contraction via the context-sharing cut") {
  Calculus shared = Calculus::shared_cut(Calculus::eqm());
  Derivation ff = weaken(ax("Q"), A("Q"));
  Derivation out = contraction_via_shared_cut(ff, shared).result;
  CHECK(out.conclusion == S("Q => Q"));
  CHECK(out.kind() == RuleKind::CutShared);
  CHECK(out.premises[0] == ax("Q"));

  // G = [P(a)]: the left premise is F => F weakened by P(a) and exchanged.
  Derivation gff = weaken(weaken(ax("P(a)"), A("Q")), A("Q"));
  Derivation o2 = contraction_via_shared_cut(gff, shared).result;
  CHECK(o2.conclusion == S("P(a), Q => P(a)"));
  CHECK(o2.premises[0].conclusion == S("P(a), Q => Q"));
  CHECK(o2.premises[0].kind() == RuleKind::Exchange);
  CHECK(checks(o2, shared));

  CHECK_THROWS_AS(contraction_via_shared_cut(gff, Calculus::eqm()), Error);

  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Derivation x = fuzz_derivation(fuzz_config(shared, seed, 12));
    Derivation y = contractions_to_shared_cuts(x, shared).result;
    CHECK(y.conclusion == x.conclusion);
    CHECK(stats(y).contraction_count == 0);
    CHECK(checks(y, shared));
  }
}
