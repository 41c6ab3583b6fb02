#include <doctest.h>

#include <functional>
#include <random>

#include "eqcalc/audit.hpp"
#include "eqcalc/congruence.hpp"
#include "eqcalc/error.hpp"
#include "eqcalc/kernel.hpp"
#include "eqcalc/search.hpp"
#include "eqcalc/transforms.hpp"
#include "support.hpp"

using namespace eqc;
using namespace eqc::test;

namespace {

std::vector<Calculus> presets() {
  std::vector<Calculus> out;
  for (const auto& n : preset_names()) out.push_back(*Calculus::from_name(n));
  return out;
}

void subterms(const Term& t, std::vector<Term>& out) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& a : t.args) subterms(a, out);
}

// Relation matrix grown by repeated passes of symmetry, transitivity and
// congruence until nothing changes.
struct BruteClosure {
  std::vector<Term> universe;
  std::vector<std::vector<bool>> rel;

  BruteClosure(const std::vector<Atom>& eqs, const Signature& sig, std::size_t depth) {
    universe = terms_up_to_depth(sig, depth);
    for (const auto& e : eqs)
      for (const auto& t : e.args) subterms(t, universe);
    std::size_t n = universe.size();
    rel.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) rel[i][i] = true;
    for (const auto& e : eqs) rel[index(e.lhs())][index(e.rhs())] = true;
    for (bool changed = true; changed;) {
      changed = false;
      auto set = [&](std::size_t i, std::size_t j) {
        if (!rel[i][j]) rel[i][j] = changed = true;
      };
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (!rel[i][j]) continue;
          set(j, i);
          for (std::size_t k = 0; k < n; ++k)
            if (rel[j][k]) set(i, k);
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const Term& x = universe[i];
          const Term& y = universe[j];
          if (x.head != y.head || x.args.size() != y.args.size() || x.args.empty()) continue;
          bool all = true;
          for (std::size_t k = 0; k < x.args.size() && all; ++k) all = rel[index(x.args[k])][index(y.args[k])];
          if (all) set(i, j);
        }
    }
  }

  std::size_t index(const Term& t) const {
    return static_cast<std::size_t>(std::find(universe.begin(), universe.end(), t) - universe.begin());
  }
};

Signature abcfg() {
  Signature sig;
  for (const char* c : {"a", "b", "c"}) sig.add_function(c, 0);
  sig.add_function("f", 1);
  sig.add_function("g", 1);
  return sig;
}

Term random_term(std::mt19937_64& rng, std::size_t depth) {
  static const char* consts[] = {"a", "b", "c"};
  static const char* funs[] = {"f", "g"};
  if (depth == 0 || rng() % 3 == 0) return Term(consts[rng() % 3]);
  return Term(funs[rng() % 2], {random_term(rng, depth - 1)});
}

std::vector<Atom> random_eqs(std::mt19937_64& rng, std::size_t count) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Atom::equality(random_term(rng, 2), random_term(rng, 2)));
  return out;
}

const Sequent kGoal = S("a=f(a) => a=f(f(a))");

}  // namespace

TEST_CASE("congruence_closure examples") {
  auto idx = congruence_closure({A("a=f(a)")}, af_signature(), 2);
  CHECK(idx.related(T("a"), T("f(a)")));
  CHECK(idx.related(T("a"), T("f(f(a))")));
  CHECK(idx.related(T("f(a)"), T("f(f(a))")));

  auto id = congruence_closure({}, abcfg(), 2);
  CHECK(id.related(T("f(a)"), T("f(a)")));
  CHECK_FALSE(id.related(T("a"), T("b")));
  CHECK_FALSE(id.related(T("f(a)"), T("g(a)")));

  Signature sig;
  for (const char* c : {"a", "b", "c"}) sig.add_function(c, 0);
  sig.add_function("g", 1);
  auto abc = congruence_closure({A("a=b"), A("b=c")}, sig, 1);
  CHECK(abc.related(T("g(a)"), T("g(b)")));
  CHECK(abc.related(T("g(b)"), T("g(c)")));
  CHECK(abc.related(T("g(a)"), T("g(c)")));
  CHECK_FALSE(abc.related(T("a"), T("g(a)")));
}

TEST_CASE("congruence_closure agrees with the brute-force closure") {
  std::mt19937_64 rng(7);
  Signature sig = abcfg();
  for (int round = 0; round < 150; ++round) {
    auto eqs = random_eqs(rng, 1 + rng() % 3);
    BruteClosure brute(eqs, sig, 2);
    auto idx = congruence_closure(eqs, sig, 2);
    for (std::size_t i = 0; i < brute.universe.size(); ++i)
      for (std::size_t j = 0; j < brute.universe.size(); ++j)
        REQUIRE_MESSAGE(idx.related(brute.universe[i], brute.universe[j]) == bool(brute.rel[i][j]),
                        to_string(brute.universe[i]) << " ~ " << to_string(brute.universe[j]));
  }
}

TEST_CASE("oracle laws") {
  std::mt19937_64 rng(11);
  Signature sig = abcfg();
  auto universe = terms_up_to_depth(sig, 2);
  for (int round = 0; round < 60; ++round) {
    auto eqs = random_eqs(rng, 1 + rng() % 2);
    auto idx = congruence_closure(eqs, sig, 2);
    auto more = eqs;
    more.push_back(Atom::equality(random_term(rng, 2), random_term(rng, 2)));
    auto bigger = congruence_closure(more, sig, 2);
    for (const auto& x : universe) {
      CHECK(idx.related(x, x));
      for (const auto& y : universe) {
        bool xy = idx.related(x, y);
        CHECK(xy == idx.related(y, x));
        if (!xy) continue;
        CHECK(bigger.related(x, y));
        if (x.depth() < 2 && y.depth() < 2) {
          CHECK(idx.related(Term("f", {x}), Term("f", {y})));
          CHECK(idx.related(Term("g", {x}), Term("g", {y})));
        }
        for (const auto& z : universe)
          if (idx.related(y, z)) CHECK(idx.related(x, z));
      }
    }
  }
}

TEST_CASE("valid examples") {
  CHECK(valid(kGoal));
  CHECK(valid(S("=> f(b)=f(b)")));
  CHECK_FALSE(valid(S("a=f(a) => b=f(b)")));
  CHECK(valid(S("a=b, P(f(a)) => P(f(b))")));
  CHECK_FALSE(valid(S("a=b => P(a)")));
  CHECK(valid(S("Q => Q")));
  CHECK_FALSE(valid(S("P(a) => P(b)")));
}

TEST_CASE("fuzz_derivation checks, is deterministic and honours disabled rules") {
  auto all = presets();
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    const Calculus& calc = all[seed % all.size()];
    auto cfg = fuzz_config(calc, seed, 4 + seed % 14);
    Derivation d = fuzz_derivation(cfg);
    auto report = check_derivation(d, calc);
    REQUIRE_MESSAGE(report.ok, calc.name() << " seed " << seed);
    auto st = stats(d);
    if (!calc.contraction_allowed) CHECK(st.contraction_count == 0);
    if (calc.cut == CutMode::None) CHECK(st.cut_count == 0);
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto cfg = fuzz_config(Calculus::eqm(), seed, 15);
    CHECK(fuzz_derivation(cfg) == fuzz_derivation(cfg));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(Calculus::eqm_minus(), seed, 1));
    CHECK(d.premises.empty());
    CHECK((d.kind() == RuleKind::Axiom || d.kind() == RuleKind::Refl));
  }
}

TEST_CASE("fuzzed derivations survive a serialization round trip") {
  auto all = presets();
  auto sig = default_fuzz_signature();
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(all[seed % all.size()], seed, 10));
    std::string text = serialize_derivation(d);
    Derivation back = parse_derivation(text, sig);
    REQUIRE(back == d);
    CHECK(serialize_derivation(back) == text);
  }
}

TEST_CASE("stats agree with a direct recursion") {
  std::function<DerivationStats(const Derivation&)> naive = [&](const Derivation& d) {
    DerivationStats s;
    s.node_count = 1;
    s.contraction_count = d.kind() == RuleKind::Contract;
    s.cut_count = d.kind() == RuleKind::Cut || d.kind() == RuleKind::CutShared;
    s.weakening_count = d.kind() == RuleKind::Weaken;
    for (const auto& p : d.premises) {
      auto q = naive(p);
      s.height = std::max(s.height, q.height + 1);
      s.node_count += q.node_count;
      s.contraction_count += q.contraction_count;
      s.cut_count += q.cut_count;
      s.weakening_count += q.weakening_count;
    }
    return s;
  };
  auto all = presets();
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(all[seed % all.size()], seed, 16));
    CHECK(stats(d) == naive(d));
  }
}

TEST_CASE("term and formula universes") {
  auto terms = term_universe(kGoal, af_signature(), 1);
  CHECK(terms.size() == 3);  // a, f(a), f(f(a))
  auto deep = term_universe(kGoal, af_signature(), 3);
  CHECK(deep.size() == 4);
  auto formulas = formula_universe(S("P(g(a)) => P(a)"), rich_signature(), 0);
  // a, b, c, g(a): 16 equalities and two predicate atoms
  CHECK(formulas.size() == 18);
  CHECK(std::find(formulas.begin(), formulas.end(), A("P(g(a))")) != formulas.end());
}

TEST_CASE("bounded_search on the two-equality goal") {
  Signature sig = af_signature();
  auto eqm = bounded_search(kGoal, Calculus::eqm(), {4, 3}, sig);
  REQUIRE(eqm.found());
  CHECK(checks(*eqm.derivation, Calculus::eqm()));
  CHECK(eqm.derivation->conclusion == kGoal);
  CHECK(stats(*eqm.derivation).height <= 4);
  CHECK(stats(*eqm.derivation).contraction_count >= 1);

  auto minus = bounded_search(kGoal, Calculus::eqm_minus(), {8, 4}, sig);
  CHECK_FALSE(minus.found());
  CHECK(not_found_message(minus.bounds) == "NOT FOUND within bounds h=8 d=4");

  Calculus ccf = Calculus::ccf(Calculus::eqp());
  auto shared = bounded_search(kGoal, ccf, {6, 3}, sig);
  REQUIRE(shared.found());
  CHECK(checks(*shared.derivation, ccf));
  CHECK(stats(*shared.derivation).cut_count == 0);
  CHECK(stats(*shared.derivation).contraction_count == 0);

  auto eq = bounded_search(kGoal, Calculus::eq(), {5, 2}, sig);
  REQUIRE(eq.found());
  CHECK(checks(*eq.derivation, Calculus::eq()));
}

TEST_CASE("bounded_search edge cases") {
  Signature sig = af_signature();
  CHECK(bounded_search(S("=> a=a"), Calculus::eqm(), {0, 0}, sig).found());
  CHECK(bounded_search(S("a=f(a) => a=f(a)"), Calculus::eqm(), {0, 1}, sig).found());
  CHECK_FALSE(bounded_search(S("a=f(a) => a=f(f(a))"), Calculus::eqm(), {1, 2}, sig).found());
  // invalid goals fail without search
  auto invalid = bounded_search(S("a=f(a) => b=a"), Calculus::eqm(), {6, 2}, rich_signature());
  CHECK_FALSE(invalid.found());
  CHECK(invalid.stats.expansions == 0);

  Signature bare;
  bare.add_predicate("Q", 0);
  auto q = parse_sequent("Q => Q", bare);
  CHECK_THROWS_AS(bounded_search(q, Calculus::eqm(), {3, 2}, bare), Error);
  try {
    bounded_search(q, Calculus::eqm(), {3, 2}, bare);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BoundsEmpty);
  }
}

TEST_CASE("search verdicts do not depend on strategy or the multiset pre-check") {
  std::mt19937_64 rng(3);
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("b", 0);
  sig.add_function("f", 1);
  std::vector<Calculus> calcs{Calculus::eqm(), Calculus::eqm_minus(), Calculus::eq(),
                              Calculus::ccf(Calculus::eqp()), Calculus::shared_cut(Calculus::eqm())};
  auto term = [&] {
    static const char* pool[] = {"a", "b", "f(a)", "f(b)", "f(f(a))"};
    return parse_term(pool[rng() % 5], sig);
  };
  int found = 0;
  for (int round = 0; round < 60; ++round) {
    Sequent goal;
    std::size_t n = rng() % 3;
    for (std::size_t i = 0; i < n; ++i) goal.antecedent.push_back(Atom::equality(term(), term()));
    goal.succedent = Atom::equality(term(), term());
    const Calculus& calc = calcs[round % calcs.size()];
    SearchBounds bounds{3, 1};
    auto base = bounded_search(goal, calc, bounds, sig, {Precheck::Off, true});
    auto pre = bounded_search(goal, calc, bounds, sig, {Precheck::On, true});
    auto dfs = bounded_search(goal, calc, bounds, sig, {Precheck::On, false});
    CHECK_MESSAGE(base.found() == pre.found(), to_string(goal) << " in " << calc.name());
    CHECK_MESSAGE(base.found() == dfs.found(), to_string(goal) << " in " << calc.name());
    if (base.found()) {
      ++found;
      CHECK(checks(*base.derivation, calc));
      CHECK(base.derivation->conclusion == goal);
      CHECK(stats(*base.derivation).height <= stats(*dfs.derivation).height);
    }
  }
  CHECK(found > 10);
}

TEST_CASE("search is deterministic and a Prover can be reused") {
  Signature sig = af_signature();
  auto one = bounded_search(kGoal, Calculus::eqm(), {4, 3}, sig);
  auto two = bounded_search(kGoal, Calculus::eqm(), {4, 3}, sig);
  REQUIRE(one.found());
  CHECK(*one.derivation == *two.derivation);

  Prover p(Calculus::ccf(Calculus::eqp()), {8, 2}, rich_signature());
  for (const char* g : {"a=b => f(a)=f(b)", "a=b, b=c => a=c", "a=b => P(a)", "a=b, P(a) => P(b)", "=> g(g(c))=g(g(c))"}) {
    Sequent goal = S(g);
    auto out = p.prove(goal);
    CHECK_MESSAGE(out.found() == valid(goal), g);
    if (out.found()) CHECK(checks(*out.derivation, Calculus::ccf(Calculus::eqp())));
  }
}

TEST_CASE("soundness: everything that checks is valid") {
  auto all = presets();
  for (const auto& calc : all) {
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
      Derivation d = fuzz_derivation(fuzz_config(calc, seed * 13 + 1, 14));
      REQUIRE(checks(d, calc));
      CHECK_MESSAGE(valid(d.conclusion), calc.name() << " seed " << seed);
    }
  }
  CHECK(valid(contraction_fixture().conclusion));
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Derivation d = fuzz_derivation(fuzz_config(Calculus::eqm_minus(), seed, 12));
    CHECK(valid(translate(d, Calculus::eq()).result.conclusion));
    Derivation e = fuzz_derivation(fuzz_config(Calculus::cf(Calculus::eqp()), seed, 12));
    CHECK(valid(eliminate_contractions(e).result.conclusion));
  }
}

TEST_CASE("audit_identity_antecedent") {
  Derivation refl(S("=> f(a)=f(a)"), rule::Refl{T("f(a)")});
  CHECK(audit_identity_antecedent(refl) == AuditResult::Pass);
  Derivation ax(S("a=a => a=a"), rule::Axiom{});
  CHECK(audit_identity_antecedent(ax) == AuditResult::Pass);
  CHECK(audit_identity_antecedent(contraction_fixture()) == AuditResult::NotApplicable);
  Derivation pred(S("P(a) => P(a)"), rule::Axiom{});
  CHECK(audit_identity_antecedent(pred) == AuditResult::NotApplicable);
  Derivation cng(S("=> f(a)=f(a)"), rule::Cng{Template::from_atom(A("f(a)=f(a)")), T("a"), T("a"), 0},
                 {refl, Derivation(S("=> a=a"), rule::Refl{T("a")})});
  CHECK_THROWS_AS(audit_identity_antecedent(cng), Error);
}

TEST_CASE("audit_single_equality") {
  Derivation ax(S("a=f(f(a)) => a=f(f(a))"), rule::Axiom{});
  CHECK(audit_single_equality(ax) == AuditResult::Pass);
  Derivation ids(S("b=b => f(f(a))=f(f(a))"), rule::Weaken{A("b=b")},
                 {Derivation(S("=> f(f(a))=f(f(a))"), rule::Refl{T("f(f(a))")})});
  CHECK(audit_single_equality(ids) == AuditResult::NotApplicable);
  CHECK_THROWS_AS(audit_single_equality(contraction_fixture()), Error);

  // f(f(a))=a, a=a => a=f(f(a)) by eq-left over a weakened identity
  Derivation back(S("f(f(a))=a => a=f(f(a))"), rule::EqLeft2{punch_holes(A("a=a"), {{1}}), T("a"), T("f(f(a))")},
                  {Derivation(S("=> a=a"), rule::Refl{T("a")})});
  REQUIRE(checks(back, Calculus::eqm_minus()));
  CHECK(audit_single_equality(back) == AuditResult::Pass);
}

TEST_CASE("audit campaigns over fuzzed derivations") {
  std::size_t applicable3 = 0;
  std::size_t applicable4 = 0;
  for (std::uint64_t seed = 1; seed <= 3000; ++seed) {
    Derivation m = fuzz_derivation(fuzz_config(Calculus::eqm(), seed, 1 + seed % 12));
    auto r3 = audit_identity_antecedent(m);
    CHECK(r3 != AuditResult::Violation);
    applicable3 += r3 != AuditResult::NotApplicable;
    Derivation n = fuzz_derivation(fuzz_config(Calculus::eqm_minus(), seed, 1 + seed % 12));
    CHECK(audit_identity_antecedent(n) != AuditResult::Violation);
    auto r4 = audit_single_equality(n);
    CHECK(r4 != AuditResult::Violation);
    applicable4 += r4 != AuditResult::NotApplicable;
  }
  CHECK(applicable3 > 100);
  MESSAGE("single-equality audit applicable: " << applicable4);
}
