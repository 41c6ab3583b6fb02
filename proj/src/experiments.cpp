#include "eqcalc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "eqcalc/audit.hpp"
#include "eqcalc/congruence.hpp"
#include "eqcalc/derivation_io.hpp"
#include "eqcalc/error.hpp"
#include "eqcalc/fuzz.hpp"
#include "eqcalc/kernel.hpp"
#include "eqcalc/parse.hpp"
#include "eqcalc/search.hpp"
#include "eqcalc/transforms.hpp"

namespace eqc {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::PreconditionViolated, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signature two_symbols() {
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("f", 1);
  return sig;
}

Sequent two_equality_goal() {
  return parse_sequent("a=f(a) => a=f(f(a))", two_symbols());
}

FuzzConfig config(const Calculus& calc, std::uint64_t seed, std::size_t size) {
  FuzzConfig cfg;
  cfg.seed = seed;
  cfg.target_size = size;
  cfg.calculus = calc;
  cfg.signature = default_fuzz_signature();
  return cfg;
}

std::vector<Calculus> all_presets() {
  std::vector<Calculus> out;
  for (const auto& n : preset_names()) {
    out.push_back(*Calculus::from_name(n));
    if (Calculus c = *Calculus::from_name(n); c.cut == CutMode::IndependentAtomic)
      out.push_back(Calculus::shared_cut(c));
  }
  return out;
}

bool all_equalities(const Derivation& d) {
  bool ok = true;
  for_each_node(d, [&](const Derivation& n) {
    ok = ok && n.conclusion.succedent.is_equality();
    for (const auto& a : n.conclusion.antecedent) ok = ok && a.is_equality();
  });
  return ok;
}

CriterionResult named(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

std::string tally(std::size_t failures, std::size_t total, const std::string& what) {
  return std::to_string(failures) + " failures over " + std::to_string(total) + " " + what;
}

CriterionResult fixture_check(const ExperimentOptions& opts) {
  CriterionResult r = named(1, "fixture check");
  Derivation d = parse_derivation(read_file(std::filesystem::path(opts.fixtures_dir) / "contraction_example.eqd"),
                                  parse_signature(read_file(std::filesystem::path(opts.fixtures_dir) / "af.sig")));
  auto full = check_derivation(d, Calculus::eqm());
  auto minus = check_derivation(d, Calculus::eqm_minus());
  bool root_only = minus.violations.size() == 1 && minus.violations[0].path.empty();
  r.pass = full.ok && full.stats.height == 2 && full.stats.contraction_count == 1 && full.stats.node_count == 3 &&
           !minus.ok && root_only;
  std::ostringstream os;
  os << "EQM " << (full.ok ? "ok" : "rejected") << " height=" << full.stats.height
     << " contractions=" << full.stats.contraction_count << " nodes=" << full.stats.node_count << "; EQM- "
     << minus.violations.size() << " violation(s)";
  if (!minus.violations.empty()) os << " at " << to_string(minus.violations[0].path);
  r.detail = os.str();
  return r;
}

CriterionResult necessity() {
  CriterionResult r = named(2, "bounded non-derivability");
  NecessityReport rep = contraction_necessity();
  r.pass = rep.eqm_minus_not_found && rep.eqm_found && rep.ccf_found;
  std::string joined;
  for (const auto& l : rep.lines) joined += (joined.empty() ? "" : "; ") + l;
  r.detail = joined;
  return r;
}

CriterionResult contraction_elimination() {
  CriterionResult r = named(3, "contraction elimination");
  Calculus cf = Calculus::cf(Calculus::eqp());
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  std::size_t kept = 0;
  std::size_t failures = 0;
  std::size_t removed = 0;
  std::uint64_t seed = 1;
  for (; kept < 1000 && seed <= 200000; ++seed) {
    FuzzConfig cfg = config(cf, seed, 6 + seed % 15);
    cfg.weights[static_cast<std::size_t>(RuleKind::Contract)] = 4;
    Derivation d = fuzz_derivation(cfg);
    std::size_t contractions = stats(d).contraction_count;
    if (contractions == 0) continue;
    ++kept;
    removed += contractions;
    try {
      Derivation out = eliminate_contractions(d).result;
      if (!checks(out, ccf) || !(out.conclusion == d.conclusion) || stats(out).contraction_count != 0) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  r.pass = kept >= 1000 && failures == 0;
  r.detail = tally(failures, kept, "derivations") + " (" + std::to_string(removed) + " contractions removed)";
  return r;
}

CriterionResult translation() {
  CriterionResult r = named(4, "translation");
  std::size_t failures = 0;
  const std::size_t total = 1000;
  for (std::uint64_t seed = 1; seed <= total; ++seed) {
    Derivation d = fuzz_derivation(config(Calculus::eqm_minus(), seed, 4 + seed % 16));
    try {
      Derivation eq = translate(d, Calculus::eq()).result;
      bool ok = checks(eq, Calculus::eq()) && eq.conclusion == d.conclusion && stats(eq).contraction_count == 0;
      Derivation back = translate(eq, Calculus::eqm()).result;
      ok = ok && checks(back, Calculus::eqm()) && back.conclusion == d.conclusion &&
           stats(back).contraction_count == 0;
      if (!ok) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  r.pass = failures == 0;
  r.detail = tally(failures, total, "round trips EQM- -> EQ -> EQM");
  return r;
}

CriterionResult projection() {
  CriterionResult r = named(5, "projection");
  std::size_t kept = 0;
  std::size_t failures = 0;
  std::size_t dropped = 0;
  for (std::uint64_t seed = 1; kept < 500 && seed <= 100000; ++seed) {
    Derivation d = fuzz_derivation(config(Calculus::eqm(), seed, 4 + seed % 16));
    if (!d.conclusion.succedent.is_equality()) continue;
    ++kept;
    Sequent expected{equalities_only(d.conclusion.antecedent), d.conclusion.succedent};
    dropped += d.conclusion.antecedent.size() - expected.antecedent.size();
    try {
      Derivation out = project_equalities(d, Calculus::eqm()).result;
      if (!checks(out, Calculus::eqm()) || !all_equalities(out) || !(out.conclusion == expected)) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  r.pass = kept >= 500 && failures == 0;
  r.detail = tally(failures, kept, "derivations") + " (" + std::to_string(dropped) + " predicate atoms dropped)";
  return r;
}

CriterionResult audits() {
  CriterionResult r = named(6, "metatheorem audits");
  const std::uint64_t total = 10000;
  std::size_t applicable3 = 0;
  std::size_t applicable4 = 0;
  std::size_t violations = 0;
  for (std::uint64_t seed = 1; seed <= total; ++seed) {
    std::size_t size = 1 + seed % 14;
    Derivation m = fuzz_derivation(config(Calculus::eqm(), seed, size));
    FuzzConfig minus_cfg = config(Calculus::eqm_minus(), seed, size);
    // Half the EQM- runs use {a, f} only, where the second audit applies more often.
    if (seed % 2 == 0) minus_cfg.signature = two_symbols();
    Derivation n = fuzz_derivation(minus_cfg);
    for (const Derivation* d : {&m, &n}) {
      AuditResult a = audit_identity_antecedent(*d);
      applicable3 += a != AuditResult::NotApplicable;
      violations += a == AuditResult::Violation;
    }
    AuditResult b = audit_single_equality(n);
    applicable4 += b != AuditResult::NotApplicable;
    violations += b == AuditResult::Violation;
  }
  r.pass = violations == 0;
  r.detail = std::to_string(violations) + " violations; identity-antecedent audit applicable to " +
             std::to_string(applicable3) + "/" + std::to_string(2 * total) + ", single-E audit applicable to " +
             std::to_string(applicable4) + "/" + std::to_string(total);
  return r;
}

CriterionResult soundness(const ExperimentOptions& opts) {
  CriterionResult r = named(7, "soundness");
  auto presets = all_presets();
  std::size_t derivations = 0;
  std::size_t failures = 0;
  auto audit = [&](const Derivation& d) {
    bool any = false;
    for (const auto& c : presets) any = any || checks(d, c);
    if (!any) return;
    ++derivations;
    if (!valid(d.conclusion)) ++failures;
  };
  for (const auto& [name, d] : load_fixtures(opts.fixtures_dir)) audit(d);
  for (const auto& calc : presets)
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) audit(fuzz_derivation(config(calc, seed * 7 + 3, 3 + seed % 16)));
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    audit(translate(fuzz_derivation(config(Calculus::eqm_minus(), seed, 12)), Calculus::eq()).result);
    audit(eliminate_contractions(fuzz_derivation(config(Calculus::cf(Calculus::eqp()), seed, 12))).result);
    Calculus shared = Calculus::shared_cut(Calculus::eqm());
    audit(contractions_to_shared_cuts(fuzz_derivation(config(shared, seed, 12)), shared).result);
    Derivation m = fuzz_derivation(config(Calculus::eqm(), seed, 12));
    if (m.conclusion.succedent.is_equality()) audit(project_equalities(m, Calculus::eqm()).result);
  }
  // Search output: small goals over {a, b, f}, several presets.
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("b", 0);
  sig.add_function("f", 1);
  const char* terms[] = {"a", "b", "f(a)", "f(b)", "f(f(a))"};
  std::vector<Calculus> searched{Calculus::eqm(), Calculus::eq(), Calculus::ccf(Calculus::eqp()),
                                 Calculus::shared_cut(Calculus::eqm_minus())};
  for (const auto& calc : searched) {
    Prover p(calc, {5, 1}, sig);
    for (const char* x : terms)
      for (const char* y : terms)
        for (const char* z : {"a", "f(a)", "f(b)"}) {
          Sequent goal = parse_sequent(std::string(x) + "=" + y + " => " + z + "=" + x, sig);
          auto out = p.prove(goal);
          if (out.found()) audit(*out.derivation);
        }
  }
  r.pass = failures == 0;
  r.detail = tally(failures, derivations, "checked derivations");
  return r;
}

CriterionResult completeness(const ExperimentOptions& opts) {
  CriterionResult r = named(8, "desk-scale completeness");
  CompletenessTally t = completeness_sweep(opts.jobs);
  r.pass = t.disagreements == 0;
  std::ostringstream os;
  os << t.sequents << " sequents, " << t.valid << " valid, " << t.found << " found, " << t.disagreements
     << " disagreements";
  for (const auto& e : t.examples) os << "; " << e;
  r.detail = os.str();
  return r;
}

}  // namespace

std::vector<std::pair<std::string, Derivation>> load_fixtures(const std::string& dir) {
  Signature sig = parse_signature(read_file(std::filesystem::path(dir) / "af.sig"));
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".eqd") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Derivation>> out;
  for (const auto& f : files) out.emplace_back(f.filename().string(), parse_derivation(read_file(f), sig));
  return out;
}

NecessityReport contraction_necessity() {
  NecessityReport rep;
  Signature sig = two_symbols();
  Sequent goal = two_equality_goal();
  SearchBounds minus_bounds{8, 4};
  auto minus = bounded_search(goal, Calculus::eqm_minus(), minus_bounds, sig);
  rep.eqm_minus_not_found = !minus.found();
  rep.eqm_minus_line = minus.found() ? "found" : not_found_message(minus_bounds);
  rep.lines.push_back("EQM-: " + rep.eqm_minus_line);

  auto eqm = bounded_search(goal, Calculus::eqm(), {4, 3}, sig);
  rep.eqm_found = eqm.found() && checks(*eqm.derivation, Calculus::eqm());
  rep.lines.push_back("EQM h4: " + std::string(rep.eqm_found ? "found" : "NOT FOUND") +
                      (eqm.found() ? " height=" + std::to_string(stats(*eqm.derivation).height) +
                                         " contractions=" + std::to_string(stats(*eqm.derivation).contraction_count)
                                   : ""));

  Calculus ccf = Calculus::ccf(Calculus::eqp());
  auto shared = bounded_search(goal, ccf, {6, 3}, sig);
  rep.ccf_found = shared.found() && checks(*shared.derivation, ccf) && stats(*shared.derivation).cut_count == 0 &&
                  stats(*shared.derivation).contraction_count == 0;
  rep.lines.push_back("CCF-EQP h6: " + std::string(shared.found() ? "found" : "NOT FOUND") +
                      (shared.found() ? " cuts=" + std::to_string(stats(*shared.derivation).cut_count) +
                                            " contractions=" +
                                            std::to_string(stats(*shared.derivation).contraction_count)
                                      : ""));
  return rep;
}

CompletenessTally completeness_sweep(unsigned jobs) {
  Signature sig;
  sig.add_function("a", 0);
  sig.add_function("b", 0);
  sig.add_function("f", 1);
  sig.add_function("g", 1);
  std::vector<Atom> eqs;
  for (const auto& t : terms_up_to_depth(sig, 2))
    for (const auto& u : terms_up_to_depth(sig, 2)) eqs.push_back(Atom::equality(t, u));
  std::vector<Antecedent> groups{{}};
  for (const auto& e : eqs) groups.push_back({e});
  for (const auto& e : eqs)
    for (const auto& f : eqs) groups.push_back({e, f});

  struct Partial {
    std::size_t valid = 0, found = 0;
    std::vector<std::pair<std::size_t, std::string>> bad;
  };
  jobs = std::max(1u, jobs);
  std::vector<Partial> parts(jobs);
  Calculus ccf = Calculus::ccf(Calculus::eqp());
  auto work = [&](unsigned w) {
    Partial& part = parts[w];
    for (std::size_t g = w; g < groups.size(); g += jobs) {
      // One prover per antecedent keeps the memo small and shared where it helps.
      Prover prover(ccf, {12, 3}, sig, SearchOptions{Precheck::Auto, false});
      for (std::size_t h = 0; h < eqs.size(); ++h) {
        Sequent goal{groups[g], eqs[h]};
        bool v = valid(goal);
        bool f = prover.prove(goal).found();
        part.valid += v;
        part.found += f;
        if (v != f) part.bad.emplace_back(g * eqs.size() + h, to_string(goal) + (v ? " valid, not found" : " found, invalid"));
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  CompletenessTally out;
  out.sequents = groups.size() * eqs.size();
  std::vector<std::pair<std::size_t, std::string>> bad;
  for (auto& p : parts) {
    out.valid += p.valid;
    out.found += p.found;
    bad.insert(bad.end(), p.bad.begin(), p.bad.end());
  }
  std::sort(bad.begin(), bad.end());
  out.disagreements = bad.size();
  for (std::size_t i = 0; i < bad.size() && i < 5; ++i) out.examples.push_back(bad[i].second);
  return out;
}

CriterionResult run_criterion(int id, const ExperimentOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = fixture_check(opts); break;
      case 2: r = necessity(); break;
      case 3: r = contraction_elimination(); break;
      case 4: r = translation(); break;
      case 5: r = projection(); break;
      case 6: r = audits(); break;
      case 7: r = soundness(opts); break;
      case 8: r = completeness(opts); break;
      default: throw Error(ErrorKind::PreconditionViolated, "no criterion " + std::to_string(id));
    }
  } catch (const Error& e) {
    if (id < 1 || id > kCriterionCount) throw;
    r.id = id;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Runtime limits are part of the criteria.
  const double limits[] = {0, 1, 300, 0, 0, 0, 0, 0, 600};
  if (limits[id] > 0 && r.seconds > limits[id]) {
    r.pass = false;
    r.detail += "; over the " + std::to_string(static_cast<int>(limits[id])) + "s limit";
  }
  return r;
}

std::string format_result(const CriterionResult& r, bool timings) {
  std::string line = std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.title + ": " + r.detail;
  if (timings) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " [%.2fs]", r.seconds);
    line += buf;
  }
  return line;
}

}  // namespace eqc
