#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eqcalc/audit.hpp"
#include "eqcalc/calculus.hpp"
#include "eqcalc/congruence.hpp"
#include "eqcalc/derivation_io.hpp"
#include "eqcalc/error.hpp"
#include "eqcalc/experiments.hpp"
#include "eqcalc/fuzz.hpp"
#include "eqcalc/kernel.hpp"
#include "eqcalc/parse.hpp"
#include "eqcalc/search.hpp"
#include "eqcalc/transforms.hpp"

#ifndef EQC_FIXTURES
#define EQC_FIXTURES "fixtures"
#endif

namespace fs = std::filesystem;
using namespace eqc;

namespace {

// Usage and I/O problems; exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool color_enabled() {
  if (const char* v = std::getenv("EQ_COLOR")) return std::string(v) == "1";
  return isatty(STDOUT_FILENO) != 0;
}

std::string paint(const std::string& word, bool good) {
  static const bool on = color_enabled();
  if (!on) return word;
  return std::string(good ? "\033[32m" : "\033[31m") + word + "\033[0m";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path.string());
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

// An argument is inline text unless it names an existing file.
std::string derivation_text(const std::string& arg) {
  if (!fs::exists(arg) && !trim(arg).empty() && trim(arg)[0] == '(') return arg;
  return read_file(arg);
}

std::string sequent_text(const std::string& arg) {
  if (!fs::exists(arg) && arg.find("=>") != std::string::npos) return arg;
  return read_file(arg);
}

void merge_into(Signature& sig, const Signature& more) {
  for (const auto& [name, arity] : more.functions())
    if (!sig.has_function(name)) sig.add_function(name, arity);
  for (const auto& [name, arity] : more.predicates())
    if (!sig.has_predicate(name)) sig.add_predicate(name, arity);
}

bool is_sexpr(const std::string& text) { return trim(text).rfind("(seq", 0) == 0; }

Signature sequent_signature(const std::string& text) {
  return is_sexpr(text) ? infer_derivation_signature(text) : infer_signature(trim(text));
}

Sequent read_sequent(const std::string& text, const Signature& sig) {
  return is_sexpr(text) ? parse_sexpr_sequent(text, sig) : parse_sequent(trim(text), sig);
}

struct CalcOpt {
  std::string name = "EQM";
  std::string cut;
};

void add_calc(CLI::App* cmd, CalcOpt& c, const std::string& fallback) {
  c.name = fallback;
  cmd->add_option("--calc", c.name, "calculus: " + [] {
    std::string s;
    for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->capture_default_str();
  cmd->add_option("--cut", c.cut, "cut modifier")->check(CLI::IsMember({"shared"}));
}

Calculus resolve(const CalcOpt& c) {
  auto calc = Calculus::from_name(c.name);
  if (!calc) throw UsageError("unknown calculus " + c.name);
  if (c.cut == "shared") {
    if (calc->cut != CutMode::IndependentAtomic) throw UsageError("--cut shared needs a calculus with cut");
    *calc = Calculus::shared_cut(*calc);
  }
  return *calc;
}

std::string stats_line(const Derivation& d) {
  DerivationStats s = stats(d);
  return "height=" + std::to_string(s.height) + " contractions=" + std::to_string(s.contraction_count) +
         " cuts=" + std::to_string(s.cut_count) + " nodes=" + std::to_string(s.node_count);
}

// Serializes, re-parses and re-checks before anything reaches the disk.
void emit_checked(const Derivation& d, const Calculus& calc, const Signature& sig, const std::string& out) {
  std::string text = serialize_derivation(d);
  Derivation back = parse_derivation(text, sig);
  if (!(back == d) || !checks(back, calc))
    throw Error(ErrorKind::InternalError, "output does not re-check in " + calc.name());
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

template <typename R>
std::vector<R> run_seeds(std::uint64_t from, std::uint64_t count, unsigned jobs, const std::function<R(std::uint64_t)>& f) {
  std::vector<R> out(count);
  jobs = std::max(1u, jobs);
  auto work = [&](unsigned w) {
    for (std::uint64_t i = w; i < count; i += jobs) out[i] = f(from + i);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  return out;
}

struct Common {
  bool timings = false;
  unsigned jobs = 1;
  std::string sig_path;
};

Signature load_sig(const Common& c) { return parse_signature(read_file(c.sig_path)); }

// check

struct CheckArgs {
  std::string input;
  CalcOpt calc;
};

int cmd_check(const CheckArgs& a, const Common& c) {
  std::string text = derivation_text(a.input);
  Signature sig = c.sig_path.empty() ? infer_derivation_signature(text) : load_sig(c);
  Derivation d = parse_derivation(text, sig);
  Calculus calc = resolve(a.calc);
  CheckReport rep = check_derivation(d, calc);
  std::cout << paint(rep.ok ? "ok" : "rejected", rep.ok) << " " << calc.name() << "\n";
  for (const auto& v : rep.violations)
    std::cout << "violation at " << to_string(v.path) << ": " << violation_kind_name(v.kind) << ": " << v.message
              << "\n";
  std::cout << stats_line(d) << "\n";
  return rep.ok ? 0 : 1;
}

// transform

struct TransformArgs {
  std::string op;
  std::string input;
  CalcOpt calc;
  std::string to;
  std::string atom;
  std::string antecedent;
  std::string out;
};

int cmd_transform(const TransformArgs& a, const Common& c) {
  std::string text = derivation_text(a.input);
  Signature sig = c.sig_path.empty() ? infer_derivation_signature(text) : load_sig(c);
  Derivation d = parse_derivation(text, sig);
  std::string target = a.antecedent + " => " + to_string(d.conclusion.succedent);
  if (c.sig_path.empty()) {
    if (!a.atom.empty()) merge_into(sig, infer_signature(a.atom + " => " + a.atom));
    if (a.op == "saturate") merge_into(sig, infer_signature(target));
  }
  TransformOutcome r;
  if (a.op == "translate") {
    auto to = Calculus::from_name(a.to);
    if (!to) throw UsageError("translate needs --to EQ or --to EQM");
    r = translate(d, *to);
  } else if (a.op == "project") {
    r = project_equalities(d, resolve(a.calc));
  } else if (a.op == "eliminate-contractions") {
    r = eliminate_contractions(d);
  } else if (a.op == "admit-contraction") {
    r = admit_contraction(d);
  } else if (a.op == "contractions-to-shared-cuts") {
    r = contractions_to_shared_cuts(d, resolve(a.calc));
  } else if (a.op == "keep-last") {
    if (a.atom.empty()) throw UsageError("keep-last needs --atom");
    r = keep_last(d, parse_atom(a.atom, sig));
  } else if (a.op == "saturate") {
    Sequent s = parse_sequent(target, sig);
    r = saturate(d, s.antecedent);
  } else {
    throw UsageError("unknown transform " + a.op);
  }
  emit_checked(r.result, r.certificate.target, sig, a.out);
  if (!a.out.empty() && a.out != "-")
    std::cout << "wrote " << a.out << " (" << r.certificate.target.name() << ") " << stats_line(r.result) << "\n";
  return 0;
}

// search

struct SearchArgs {
  std::string goal;
  CalcOpt calc;
  std::size_t max_height = 8;
  std::size_t max_depth = 3;
  std::string precheck = "auto";
  bool first = false;
  std::string out;
};

int cmd_search(const SearchArgs& a, const Common& c) {
  std::string text = sequent_text(a.goal);
  Signature sig = c.sig_path.empty() ? sequent_signature(text) : load_sig(c);
  Sequent goal = read_sequent(text, sig);
  Calculus calc = resolve(a.calc);
  SearchBounds bounds{a.max_height, a.max_depth};
  SearchOptions opts;
  opts.relaxed = a.precheck == "on" ? Precheck::On : a.precheck == "off" ? Precheck::Off : Precheck::Auto;
  opts.shortest = !a.first;
  auto start = std::chrono::steady_clock::now();
  SearchOutcome r = bounded_search(goal, calc, bounds, sig, opts);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.found()) {
    std::cout << paint(not_found_message(bounds), false) << "\n";
  } else {
    emit_checked(*r.derivation, calc, sig, a.out.empty() ? "-" : a.out);
    std::cout << stats_line(*r.derivation) << "\n";
  }
  if (c.timings) std::printf("states=%zu time=%.2fs\n", r.stats.states, secs);
  return r.found() ? 0 : 1;
}

// oracle

int cmd_oracle(const std::string& arg, const Common& c) {
  std::string text = sequent_text(arg);
  Signature sig = c.sig_path.empty() ? sequent_signature(text) : load_sig(c);
  bool v = valid(read_sequent(text, sig));
  std::cout << paint(v ? "valid" : "invalid", v) << "\n";
  return v ? 0 : 1;
}

// fuzz

struct FuzzArgs {
  CalcOpt calc;
  std::uint64_t from = 1;
  std::uint64_t seeds = 1000;
  std::size_t size = 12;
  std::size_t depth = 2;
  std::string out;
};

int cmd_fuzz(const FuzzArgs& a, const Common& c) {
  Calculus calc = resolve(a.calc);
  Signature sig = c.sig_path.empty() ? default_fuzz_signature() : load_sig(c);
  if (!a.out.empty()) fs::create_directories(a.out);
  struct One {
    bool ok = false, sound = false;
    DerivationStats s;
  };
  auto results = run_seeds<One>(a.from, a.seeds, c.jobs, [&](std::uint64_t seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    cfg.target_size = a.size;
    cfg.calculus = calc;
    cfg.signature = sig;
    cfg.max_term_depth = a.depth;
    Derivation d = fuzz_derivation(cfg);
    One o{checks(d, calc), valid(d.conclusion), stats(d)};
    if (!a.out.empty() && o.ok)
      emit_checked(d, calc, sig, (fs::path(a.out) / ("seed-" + std::to_string(seed) + ".eqd")).string());
    return o;
  });
  std::size_t ok = 0, sound = 0, contractions = 0, cuts = 0, height = 0, nodes = 0;
  for (const auto& o : results) {
    ok += o.ok;
    sound += o.sound;
    contractions += o.s.contraction_count;
    cuts += o.s.cut_count;
    height = std::max(height, o.s.height);
    nodes += o.s.node_count;
  }
  bool pass = ok == results.size() && sound == results.size();
  std::cout << paint(pass ? "ok" : "failed", pass) << " " << calc.name() << " seeds " << a.from << ".."
            << a.from + a.seeds - 1 << "\n";
  std::cout << "derivations=" << results.size() << " checked=" << ok << " valid=" << sound << " nodes=" << nodes
            << " contractions=" << contractions << " cuts=" << cuts << " max_height=" << height << "\n";
  return pass ? 0 : 1;
}

// audit

struct AuditArgs {
  std::string which = "all";
  std::uint64_t from = 1;
  std::uint64_t seeds = 10000;
  std::size_t size = 14;
};

int cmd_audit(const AuditArgs& a, const Common& c) {
  Signature af;
  af.add_function("a", 0);
  af.add_function("f", 1);
  Signature wide = c.sig_path.empty() ? default_fuzz_signature() : load_sig(c);
  Signature narrow = c.sig_path.empty() ? af : wide;
  bool identity = a.which != "single-equality";
  bool single = a.which != "identity-antecedent";
  struct One {
    AuditResult id_m = AuditResult::NotApplicable, id_n = AuditResult::NotApplicable,
                single = AuditResult::NotApplicable;
  };
  auto fuzz = [&](const Calculus& calc, const Signature& sig, std::uint64_t seed) {
    FuzzConfig cfg;
    cfg.seed = seed;
    cfg.target_size = 1 + seed % a.size;
    cfg.calculus = calc;
    cfg.signature = sig;
    return fuzz_derivation(cfg);
  };
  auto results = run_seeds<One>(a.from, a.seeds, c.jobs, [&](std::uint64_t seed) {
    One o;
    if (identity) {
      o.id_m = audit_identity_antecedent(fuzz(Calculus::eqm(), wide, seed));
      o.id_n = audit_identity_antecedent(fuzz(Calculus::eqm_minus(), wide, seed));
    }
    if (single) o.single = audit_single_equality(fuzz(Calculus::eqm_minus(), narrow, seed));
    return o;
  });
  bool pass = true;
  auto report = [&](const std::string& name, auto pick, std::size_t per_seed) {
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& o : results)
      for (AuditResult r : pick(o)) ++counts[static_cast<int>(r)];
    bool ok = counts[static_cast<int>(AuditResult::Violation)] == 0;
    pass = pass && ok;
    std::cout << paint(ok ? "ok" : "violated", ok) << " " << name << " derivations=" << results.size() * per_seed
              << " pass=" << counts[0] << " violation=" << counts[1] << " not-applicable=" << counts[2] << "\n";
  };
  if (identity)
    report("identity-antecedent", [](const One& o) { return std::vector{o.id_m, o.id_n}; }, 2);
  if (single) report("single-equality", [](const One& o) { return std::vector{o.single}; }, 1);
  return pass ? 0 : 1;
}

// experiment

int cmd_experiment(const std::string& name, const std::string& fixtures, const Common& c) {
  std::vector<int> ids;
  if (name == "contraction-necessity") {
    NecessityReport rep = contraction_necessity();
    for (const auto& l : rep.lines) std::cout << l << "\n";
    ids = {2};
  } else if (name == "corollary" || name == "completeness") {
    ids = {8};
  } else if (name == "all") {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  } else {
    try {
      int id = std::stoi(name);
      if (id < 1 || id > kCriterionCount) throw std::out_of_range(name);
      ids = {id};
    } catch (const std::exception&) {
      throw UsageError("unknown experiment " + name);
    }
  }
  ExperimentOptions opts{fixtures, c.jobs};
  bool pass = true;
  for (int id : ids) {
    CriterionResult r = run_criterion(id, opts);
    pass = pass && r.pass;
    std::string line = format_result(r, c.timings);
    std::cout << paint(r.pass ? "PASS" : "FAIL", r.pass) << line.substr(4) << std::endl;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequent calculi with equality: check, transform, search"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--timings", common.timings, "print timing information");
  app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--sig", common.sig_path, "signature file; inferred when omitted");
  app.fallthrough();

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "check a derivation in a calculus");
  c_check->add_option("derivation", check.input, "file or inline derivation")->required();
  add_calc(c_check, check.calc, "EQM");

  TransformArgs tr;
  auto* c_tr = app.add_subcommand("transform", "transform a derivation and re-check the result");
  c_tr->add_option("op", tr.op, "translate, project, eliminate-contractions, admit-contraction, "
                                "contractions-to-shared-cuts, keep-last, saturate")
      ->required();
  c_tr->add_option("derivation", tr.input, "file or inline derivation")->required();
  add_calc(c_tr, tr.calc, "EQM");
  c_tr->add_option("--to", tr.to, "translate target: EQ or EQM");
  c_tr->add_option("--atom", tr.atom, "keep-last formula");
  c_tr->add_option("--antecedent", tr.antecedent, "saturate target antecedent");
  c_tr->add_option("--out", tr.out, "output file; stdout when omitted");

  SearchArgs se;
  auto* c_se = app.add_subcommand("search", "bounded backward proof search");
  c_se->add_option("sequent", se.goal, "file or inline sequent")->required();
  add_calc(c_se, se.calc, "EQM");
  c_se->add_option("--max-height", se.max_height)->capture_default_str();
  c_se->add_option("--max-depth", se.max_depth, "term depth bound")->capture_default_str();
  c_se->add_option("--precheck", se.precheck)->check(CLI::IsMember({"auto", "on", "off"}))->capture_default_str();
  c_se->add_flag("--first", se.first, "skip iterative deepening; any derivation within the bound");
  c_se->add_option("--out", se.out, "output file; stdout when omitted");

  std::string oracle_goal;
  auto* c_or = app.add_subcommand("oracle", "congruence-closure validity");
  c_or->add_option("sequent", oracle_goal, "file or inline sequent")->required();

  FuzzArgs fz;
  auto* c_fz = app.add_subcommand("fuzz", "generate and check random derivations");
  add_calc(c_fz, fz.calc, "EQM");
  c_fz->add_option("--from", fz.from, "first seed")->capture_default_str();
  c_fz->add_option("--seeds", fz.seeds, "number of seeds")->capture_default_str();
  c_fz->add_option("--size", fz.size, "target node count")->capture_default_str();
  c_fz->add_option("--depth", fz.depth, "term depth")->capture_default_str();
  c_fz->add_option("--out", fz.out, "directory for seed-N.eqd files");

  AuditArgs au;
  auto* c_au = app.add_subcommand("audit", "run the identity-antecedent and single-equality audits on fuzzed derivations");
  c_au->add_option("which", au.which)
      ->check(CLI::IsMember({"identity-antecedent", "single-equality", "all"}))
      ->capture_default_str();
  c_au->add_option("--from", au.from, "first seed")->capture_default_str();
  c_au->add_option("--seeds", au.seeds, "number of seeds")->capture_default_str();
  c_au->add_option("--size", au.size, "sizes cycle through 1..N")->capture_default_str();

  std::string experiment = "all";
  std::string fixtures = EQC_FIXTURES;
  auto* c_ex = app.add_subcommand("experiment", "acceptance scenarios with PASS/FAIL lines");
  c_ex->add_option("name", experiment, "contraction-necessity, completeness, all, or 1..8")
      ->capture_default_str();
  c_ex->add_option("--fixtures", fixtures, "fixtures directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_check) return cmd_check(check, common);
    if (*c_tr) return cmd_transform(tr, common);
    if (*c_se) return cmd_search(se, common);
    if (*c_or) return cmd_oracle(oracle_goal, common);
    if (*c_fz) return cmd_fuzz(fz, common);
    if (*c_au) return cmd_audit(au, common);
    if (*c_ex) return cmd_experiment(experiment, fixtures, common);
  } catch (const UsageError& e) {
    std::cerr << "eq: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "eq: " << e.what() << "\n";
    // A transform or search whose output fails to re-check is a failed run, not a usage error.
    return e.kind() == ErrorKind::InternalError || e.kind() == ErrorKind::SourceDoesNotCheck ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "eq: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
