#include "eqcalc/search.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "eqcalc/congruence.hpp"
#include "eqcalc/error.hpp"
#include "eqcalc/kernel.hpp"

namespace eqc {

namespace {

void collect_subterms(const Term& t, std::vector<Term>& out) {
  for (const auto& a : t.args) collect_subterms(a, out);
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

}  // namespace

std::vector<Term> term_universe(const Sequent& goal, const Signature& sig, std::size_t max_term_depth) {
  std::vector<Term> out = terms_up_to_depth(sig, max_term_depth);
  std::unordered_set<Term, TermHash> seen(out.begin(), out.end());
  std::vector<Term> extra;
  auto add_atom = [&](const Atom& a) {
    for (const auto& t : a.args) collect_subterms(t, extra);
  };
  for (const auto& a : goal.antecedent) add_atom(a);
  add_atom(goal.succedent);
  for (auto& t : extra)
    if (seen.insert(t).second) out.push_back(t);
  return out;
}

std::vector<Atom> formula_universe(const Sequent& goal, const Signature& sig, std::size_t max_term_depth) {
  std::vector<Term> terms = term_universe(goal, sig, max_term_depth);
  std::vector<Atom> out;
  for (const auto& t : terms)
    for (const auto& u : terms) out.push_back(Atom::equality(t, u));
  auto add_pred = [&](const Atom& a) {
    if (!a.is_equality() && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (const auto& a : goal.antecedent) add_pred(a);
  add_pred(goal.succedent);
  return out;
}

std::string not_found_message(const SearchBounds& bounds) {
  return "NOT FOUND within bounds h=" + std::to_string(bounds.max_height) +
         " d=" + std::to_string(bounds.max_term_depth);
}

namespace {

using TermId = int;
using AtomId = int;
using CtxId = int;
constexpr int kInf = INT_MAX;

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

// Hash-consed terms and atoms.
class Store {
 public:
  int symbol(const std::string& name) {
    auto [it, fresh] = symbols_.emplace(name, static_cast<int>(names_.size()));
    if (fresh) names_.push_back(name);
    return it->second;
  }

  TermId term(int sym, const std::vector<TermId>& args) {
    std::vector<int> key{sym};
    key.insert(key.end(), args.begin(), args.end());
    auto [it, fresh] = term_ids_.emplace(std::move(key), static_cast<int>(terms_.size()));
    if (fresh) {
      int size = 1;
      for (TermId a : args) size += terms_[a].size;
      terms_.push_back({sym, args, size});
    }
    return it->second;
  }

  TermId term(const Term& t) {
    std::vector<TermId> args;
    for (const auto& a : t.args) args.push_back(term(a));
    return term(symbol(t.head), args);
  }

  // pred = -1 for equalities.
  AtomId atom(int pred, const std::vector<TermId>& args) {
    std::vector<int> key{pred};
    key.insert(key.end(), args.begin(), args.end());
    auto [it, fresh] = atom_ids_.emplace(std::move(key), static_cast<int>(atoms_.size()));
    if (fresh) atoms_.push_back({pred, args});
    return it->second;
  }

  AtomId atom(const Atom& a) {
    std::vector<TermId> args;
    for (const auto& t : a.args) args.push_back(term(t));
    return atom(a.is_equality() ? -1 : symbol(a.name), args);
  }

  AtomId equality(TermId l, TermId r) { return atom(-1, {l, r}); }

  bool is_equality(AtomId a) const { return atoms_[a].pred < 0; }
  bool is_identity(AtomId a) const { return is_equality(a) && atoms_[a].args[0] == atoms_[a].args[1]; }
  TermId lhs(AtomId a) const { return atoms_[a].args[0]; }
  TermId rhs(AtomId a) const { return atoms_[a].args[1]; }
  int pred(AtomId a) const { return atoms_[a].pred; }
  const std::vector<TermId>& atom_args(AtomId a) const { return atoms_[a].args; }
  int term_sym(TermId t) const { return terms_[t].sym; }
  int term_size(TermId t) const { return terms_[t].size; }

  // Every term obtained from x by replacing one occurrence of l with r.
  void rewrites(TermId x, TermId l, TermId r, std::vector<TermId>& out) {
    if (x == l) {
      out.push_back(r);
      return;
    }
    const std::vector<TermId> args = terms_[x].args;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::vector<TermId> inner;
      rewrites(args[i], l, r, inner);
      for (TermId y : inner) {
        std::vector<TermId> next = args;
        next[i] = y;
        out.push_back(term(terms_[x].sym, next));
      }
    }
  }

  // Size of the disagreement between two terms: 0 when identical.
  int mismatch(TermId x, TermId y) const {
    if (x == y) return 0;
    const TermNode& a = terms_[x];
    const TermNode& b = terms_[y];
    if (a.sym != b.sym || a.args.size() != b.args.size()) return a.size + b.size;
    int d = 0;
    for (std::size_t i = 0; i < a.args.size(); ++i) d += mismatch(a.args[i], b.args[i]);
    return d;
  }
  const std::vector<TermId>& term_args(TermId t) const { return terms_[t].args; }

  Term to_term(TermId t) const {
    Term out(names_[terms_[t].sym]);
    for (TermId a : terms_[t].args) out.args.push_back(to_term(a));
    return out;
  }

  Atom to_atom(AtomId a) const {
    std::vector<Term> args;
    for (TermId t : atoms_[a].args) args.push_back(to_term(t));
    if (atoms_[a].pred < 0) return Atom::equality(args[0], args[1]);
    return Atom::predicate(names_[atoms_[a].pred], std::move(args));
  }

  // Distinct subterms of an atom's arguments, in preorder of first occurrence.
  std::vector<TermId> subterms(AtomId a) const {
    std::vector<TermId> out;
    for (TermId t : atoms_[a].args) collect(t, out);
    return out;
  }

  std::vector<Path> occurrences(AtomId a, TermId s) const {
    std::vector<Path> out;
    Path p;
    for (std::size_t i = 0; i < atoms_[a].args.size(); ++i) {
      p.push_back(i);
      occur(atoms_[a].args[i], s, p, out);
      p.pop_back();
    }
    return out;
  }

  // The atom with the given positions replaced by r.
  AtomId substitute(AtomId a, const std::vector<Path>& holes, TermId r) {
    std::vector<TermId> args = atoms_[a].args;
    Path p;
    for (std::size_t i = 0; i < args.size(); ++i) {
      p.push_back(i);
      args[i] = replace(args[i], holes, p, r);
      p.pop_back();
    }
    return atom(atoms_[a].pred, args);
  }

 private:
  struct TermNode {
    int sym;
    std::vector<TermId> args;
    int size;
  };
  struct AtomNode {
    int pred;
    std::vector<TermId> args;
  };

  void collect(TermId t, std::vector<TermId>& out) const {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    for (TermId a : terms_[t].args) collect(a, out);
  }

  void occur(TermId t, TermId s, Path& p, std::vector<Path>& out) const {
    if (t == s) {
      out.push_back(p);
      return;
    }
    for (std::size_t i = 0; i < terms_[t].args.size(); ++i) {
      p.push_back(i);
      occur(terms_[t].args[i], s, p, out);
      p.pop_back();
    }
  }

  TermId replace(TermId t, const std::vector<Path>& holes, Path& p, TermId r) {
    bool below = false;
    for (const auto& h : holes) {
      if (h == p) return r;
      if (h.size() > p.size() && std::equal(p.begin(), p.end(), h.begin())) below = true;
    }
    if (!below) return t;
    std::vector<TermId> args = terms_[t].args;
    for (std::size_t i = 0; i < args.size(); ++i) {
      p.push_back(i);
      args[i] = replace(args[i], holes, p, r);
      p.pop_back();
    }
    return term(terms_[t].sym, args);
  }

  std::unordered_map<std::string, int> symbols_;
  std::vector<std::string> names_;
  std::vector<TermNode> terms_;
  std::vector<AtomNode> atoms_;
  std::unordered_map<std::vector<int>, int, VecHash> term_ids_;
  std::unordered_map<std::vector<int>, int, VecHash> atom_ids_;
};

struct Closure {
  CongruenceIndex cc;
  std::unordered_map<TermId, int> nodes;
  // Universe terms grouped by class, keyed by each member.
  std::size_t grouped = 0;
  std::unordered_map<TermId, std::shared_ptr<std::vector<TermId>>> peers;
  // Rewrite distances between universe terms using eqs in both directions,
  // staying inside the universe; -1 when unreachable.
  std::vector<AtomId> eqs;
  std::size_t measured = 0;
  std::vector<int> dist;
};

struct Choice {
  Choice() = default;
  explicit Choice(RuleKind k) : kind(k) {}

  RuleKind kind = RuleKind::Axiom;
  CtxId c0 = -1, c1 = -1;
  AtomId a0 = -1, a1 = -1;
  TermId r = -1, s = -1;
  AtomId formula = -1;
  std::size_t index = 0;  // exchange index or split
  std::vector<Path> holes;
};

struct Entry {
  std::int8_t valid = -1;
  int fail = -1;  // no proof of height <= fail
  int proved = kInf;
  Choice choice;
};

struct RelaxedEntry {
  int fail = -1;
  int proved = kInf;
};

std::uint64_t key(CtxId c, AtomId a) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) << 32) | static_cast<std::uint32_t>(a);
}

constexpr std::size_t memo_limit = 2'000'000;
constexpr std::size_t closure_limit = 20'000;

}  // namespace

struct Prover::Impl {
  Calculus calc;
  SearchBounds bounds;
  Signature sig;
  bool relaxed_enabled = false;
  bool shortest = true;

  Store store;
  std::vector<TermId> universe;
  std::unordered_set<TermId> universe_set;
  std::unordered_map<TermId, int> universe_index;
  std::vector<AtomId> formulas;
  std::unordered_set<AtomId> formula_set;

  std::vector<std::vector<AtomId>> ctxs;
  std::vector<int> ctx_closure;
  std::unordered_map<std::vector<int>, CtxId, VecHash> ctx_ids;
  std::vector<Closure> closures;
  std::unordered_map<std::vector<int>, int, VecHash> closure_ids;

  std::unordered_map<std::uint64_t, Entry> memo;
  std::unordered_map<std::uint64_t, RelaxedEntry> relaxed;
  std::unordered_map<std::uint64_t, bool> validity;
  SearchStats stats;

  Impl(const Calculus& c, const SearchBounds& b, const Signature& s, const SearchOptions& o)
      : calc(c), bounds(b), sig(s) {
    bool heavy = c.cut != CutMode::None || c.contraction_allowed;
    shortest = o.shortest;
    relaxed_enabled = o.relaxed == Precheck::On || (o.relaxed == Precheck::Auto && heavy);
    for (const auto& t : terms_up_to_depth(sig, bounds.max_term_depth)) add_universe_term(store.term(t));
  }

  bool add_universe_term(TermId t) {
    if (!universe_set.insert(t).second) return false;
    universe_index.emplace(t, static_cast<int>(universe.size()));
    universe.push_back(t);
    return true;
  }

  // Grows the universes to cover the goal; stale failures are dropped.
  void extend_universe(const Sequent& goal) {
    bool grew = false;
    std::vector<Term> terms;
    auto add_atom = [&](const Atom& a) {
      for (const auto& t : a.args) collect_subterms(t, terms);
    };
    for (const auto& a : goal.antecedent) add_atom(a);
    add_atom(goal.succedent);
    std::vector<TermId> fresh;
    for (const auto& t : terms) {
      TermId id = store.term(t);
      if (add_universe_term(id)) {
        grew = true;
        fresh.push_back(id);
      }
    }
    if (grew || formulas.empty()) {
      formulas.clear();
      formula_set.clear();
      for (TermId t : universe)
        for (TermId u : universe) add_formula(store.equality(t, u));
    }
    auto add_pred = [&](const Atom& a) {
      if (!a.is_equality() && add_formula(store.atom(a))) grew = true;
    };
    for (const auto& a : goal.antecedent) add_pred(a);
    add_pred(goal.succedent);
    if (grew) {
      memo.clear();
      relaxed.clear();
    }
  }

  bool add_formula(AtomId a) {
    if (!formula_set.insert(a).second) return false;
    formulas.push_back(a);
    return true;
  }

  CtxId context(std::vector<AtomId> atoms) {
    auto it = ctx_ids.find(atoms);
    if (it != ctx_ids.end()) return it->second;
    CtxId id = static_cast<CtxId>(ctxs.size());
    ctx_ids.emplace(atoms, id);
    // Closures depend on the set of non-identity equalities only.
    std::vector<int> ckey;
    for (AtomId a : atoms)
      if (store.is_equality(a) && !store.is_identity(a)) ckey.push_back(a);
    std::sort(ckey.begin(), ckey.end());
    ckey.erase(std::unique(ckey.begin(), ckey.end()), ckey.end());
    auto [cit, fresh] = closure_ids.emplace(ckey, static_cast<int>(closures.size()));
    if (fresh) {
      closures.emplace_back();
      Closure& cl = closures.back();
      cl.eqs = ckey;
      for (AtomId a : ckey) cl.cc.merge(node(cl, store.lhs(a)), node(cl, store.rhs(a)));
    }
    ctx_closure.push_back(cit->second);
    ctxs.push_back(std::move(atoms));
    return id;
  }

  int node(Closure& cl, TermId t) {
    if (auto it = cl.nodes.find(t); it != cl.nodes.end()) return it->second;
    std::vector<int> args;
    for (TermId a : store.term_args(t)) args.push_back(node(cl, a));
    int n = cl.cc.add_node(store.term_sym(t), args);
    cl.nodes.emplace(t, n);
    return n;
  }

  bool related(CtxId c, TermId x, TermId y) {
    if (x == y) return true;
    Closure& cl = closures[ctx_closure[c]];
    int nx = node(cl, x);
    int ny = node(cl, y);
    return cl.cc.related(nx, ny);
  }

  // Universe terms related to s in the context's closure, s included.
  const std::vector<TermId>& peers(CtxId c, TermId s) {
    Closure& cl = closures[ctx_closure[c]];
    if (cl.grouped != universe.size()) {
      cl.peers.clear();
      std::unordered_map<int, std::shared_ptr<std::vector<TermId>>> by_root;
      for (TermId t : universe) node(cl, t);
      for (TermId t : universe) {
        auto& group = by_root[cl.cc.find(node(cl, t))];
        if (!group) group = std::make_shared<std::vector<TermId>>();
        group->push_back(t);
      }
      for (TermId t : universe) cl.peers[t] = by_root[cl.cc.find(node(cl, t))];
      cl.grouped = universe.size();
    }
    return *cl.peers.at(s);
  }

  bool valid(CtxId c, AtomId h) {
    auto [it, fresh] = validity.emplace(key(c, h), false);
    if (!fresh) return it->second;
    bool v = false;
    if (store.is_equality(h)) {
      v = related(c, store.lhs(h), store.rhs(h));
    } else {
      for (AtomId a : ctxs[c]) {
        if (store.pred(a) != store.pred(h)) continue;
        const auto& xs = store.atom_args(a);
        const auto& ys = store.atom_args(h);
        bool all = xs.size() == ys.size();
        for (std::size_t i = 0; i < xs.size() && all; ++i) all = related(c, xs[i], ys[i]);
        if (all) {
          v = true;
          break;
        }
      }
    }
    it = validity.find(key(c, h));
    it->second = v;
    return v;
  }

  // Nonempty subsets of occurrence lists, as hole sets, by increasing mask.
  template <typename F>
  bool for_each_hole_set(const std::vector<Path>& occ, bool include_empty, F&& f) {
    std::size_t n = occ.size();
    for (std::uint64_t mask = include_empty ? 0 : 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<Path> holes;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) holes.push_back(occ[i]);
      if (f(holes)) return true;
    }
    return false;
  }

  static constexpr int kFar = 1000;

  void measure(Closure& cl) {
    const std::size_t n = universe.size();
    std::vector<std::vector<int>> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<TermId> out;
      for (AtomId e : cl.eqs) {
        store.rewrites(universe[i], store.lhs(e), store.rhs(e), out);
        store.rewrites(universe[i], store.rhs(e), store.lhs(e), out);
      }
      for (TermId y : out)
        if (auto it = universe_index.find(y); it != universe_index.end()) next[i].push_back(it->second);
    }
    cl.dist.assign(n * n, -1);
    std::vector<int> queue;
    for (std::size_t src = 0; src < n; ++src) {
      int* row = &cl.dist[src * n];
      row[src] = 0;
      queue.assign(1, static_cast<int>(src));
      for (std::size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        for (int v : next[u])
          if (row[v] < 0) {
            row[v] = row[u] + 1;
            queue.push_back(v);
          }
      }
    }
    cl.measured = n;
  }

  int term_distance(CtxId c, TermId x, TermId y) {
    if (x == y) return 0;
    Closure& cl = closures[ctx_closure[c]];
    if (cl.measured != universe.size()) measure(cl);
    auto ix = universe_index.find(x);
    auto iy = universe_index.find(y);
    if (ix != universe_index.end() && iy != universe_index.end()) {
      int d = cl.dist[static_cast<std::size_t>(ix->second) * universe.size() + iy->second];
      if (d >= 0) return d;
    }
    return kFar + store.mismatch(x, y);
  }

  // Estimated distance from an axiom or reflexivity leaf; orders candidates.
  int cost(CtxId c, AtomId a) {
    const auto& g = ctxs[c];
    if (store.is_identity(a) || std::find(g.begin(), g.end(), a) != g.end()) return 0;
    if (store.is_equality(a)) return term_distance(c, store.lhs(a), store.rhs(a));
    int best = 2 * kFar;
    for (AtomId x : g) {
      if (store.pred(x) != store.pred(a)) continue;
      int d = 0;
      for (std::size_t i = 0; i < store.atom_args(a).size(); ++i)
        d += term_distance(c, store.atom_args(x)[i], store.atom_args(a)[i]);
      best = std::min(best, d);
    }
    return best;
  }

  // ---- exact search ------------------------------------------------------

  bool search(CtxId c, AtomId h, int height) {
    Entry& e = memo[key(c, h)];
    if (e.proved <= height) return true;
    if (e.fail >= height) return false;
    ++stats.expansions;
    const std::vector<AtomId> g = ctxs[c];
    const std::size_t n = g.size();

    if (n == 1 && g[0] == h) {
      e.proved = 0;
      e.choice = Choice{RuleKind::Axiom};
      return true;
    }
    if (n == 0 && store.is_identity(h)) {
      e.proved = 0;
      e.choice = Choice{RuleKind::Refl};
      return true;
    }
    if (height == 0) {
      e.fail = 0;
      return false;
    }
    const int sub = height - 1;

    // A nested visit may prove this state first; keep whichever proof is
    // lower so that choices never form a cycle.
    auto record = [&](int p, Choice&& ch) {
      if (p < e.proved) {
        e.proved = p;
        e.choice = std::move(ch);
      }
      return true;
    };
    auto one = [&](Choice ch) {
      if (e.proved <= height) return true;
      if (!valid(ch.c0, ch.a0)) return false;
      if (!search(ch.c0, ch.a0, sub)) return false;
      return record(1 + memo[key(ch.c0, ch.a0)].proved, std::move(ch));
    };
    auto two = [&](Choice ch) {
      if (e.proved <= height) return true;
      if (ch.c0 == c && ch.a0 == h) return false;
      if (ch.c1 == c && ch.a1 == h) return false;
      if (!valid(ch.c1, ch.a1) || !valid(ch.c0, ch.a0)) return false;
      if (!search(ch.c0, ch.a0, sub) || !search(ch.c1, ch.a1, sub)) return false;
      return record(1 + std::max(memo[key(ch.c0, ch.a0)].proved, memo[key(ch.c1, ch.a1)].proved), std::move(ch));
    };
    auto ctx_of = [&](std::size_t from, std::size_t to, std::optional<AtomId> extra = std::nullopt) {
      std::vector<AtomId> atoms(g.begin() + static_cast<std::ptrdiff_t>(from),
                                g.begin() + static_cast<std::ptrdiff_t>(to));
      if (extra) atoms.push_back(*extra);
      return context(std::move(atoms));
    };

    auto exchanges = [&] {
      if (!calc.exchange_allowed) return false;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (g[i] == g[i + 1]) continue;
        std::vector<AtomId> swapped = g;
        std::swap(swapped[i], swapped[i + 1]);
        Choice ch{RuleKind::Exchange};
        ch.c0 = context(std::move(swapped));
        ch.a0 = h;
        ch.index = i;
        if (one(std::move(ch))) return true;
      }
      return false;
    };

    if (calc.weakening_allowed && n >= 1) {
      Choice ch{RuleKind::Weaken};
      ch.c0 = ctx_of(0, n - 1);
      ch.a0 = h;
      if (one(std::move(ch))) return true;
    }
    // A goal already in the context closes by structural rules alone.
    const bool closable = std::find(g.begin(), g.end(), h) != g.end();
    if (closable && exchanges()) return true;

    if (calc.eq_mechanism == EqMechanism::EqLeftPair && n >= 1 && store.is_equality(g[n - 1])) {
      CtxId rest = ctx_of(0, n - 1);
      TermId x = store.lhs(g[n - 1]);
      TermId y = store.rhs(g[n - 1]);
      for (int kind = 1; kind <= 2; ++kind) {
        // eq-left-1 reads the last atom as r=s, eq-left-2 as s=r.
        TermId r = kind == 1 ? x : y;
        TermId s = kind == 1 ? y : x;
        if (for_each_hole_set(store.occurrences(h, s), !calc.weakening_allowed, [&](const std::vector<Path>& holes) {
              Choice ch{kind == 1 ? RuleKind::EqLeft1 : RuleKind::EqLeft2};
              ch.c0 = rest;
              ch.a0 = store.substitute(h, holes, r);
              ch.r = r;
              ch.s = s;
              ch.holes = holes;
              return one(std::move(ch));
            }))
          return true;
      }
    }

    if (calc.eq_mechanism == EqMechanism::CngShared) {
      // Candidates whose premises are nearest to closing go first.
      std::vector<std::pair<std::pair<int, int>, Choice>> cands;
      for (TermId s : store.subterms(h)) {
        if (!universe_set.count(s)) continue;
        for_each_hole_set(store.occurrences(h, s), false, [&](const std::vector<Path>& holes) {
          for (TermId r : peers(c, s)) {
            if (r == s) continue;
            Choice ch{RuleKind::CngShared};
            ch.c0 = c;
            ch.a0 = store.substitute(h, holes, r);
            ch.c1 = c;
            ch.a1 = store.equality(r, s);
            ch.r = r;
            ch.s = s;
            ch.holes = holes;
            int x = cost(c, ch.a0);
            int y = cost(c, ch.a1);
            cands.emplace_back(std::make_pair(std::max(x, y), x + y), std::move(ch));
          }
          return false;
        });
      }
      std::stable_sort(cands.begin(), cands.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      for (auto& cand : cands)
        if (two(std::move(cand.second))) return true;
    }

    if (calc.eq_mechanism == EqMechanism::Cng) {
      for (std::size_t k = 0; k <= n; ++k) {
        CtxId left = ctx_of(0, k);
        CtxId right = ctx_of(k, n);
        for (TermId s : store.subterms(h)) {
          if (!universe_set.count(s)) continue;
          if (for_each_hole_set(store.occurrences(h, s), false, [&](const std::vector<Path>& holes) {
                for (TermId r : peers(right, s)) {
                  Choice ch{RuleKind::Cng};
                  ch.c0 = left;
                  ch.a0 = store.substitute(h, holes, r);
                  ch.c1 = right;
                  ch.a1 = store.equality(r, s);
                  ch.r = r;
                  ch.s = s;
                  ch.holes = holes;
                  ch.index = k;
                  if (two(std::move(ch))) return true;
                }
                return false;
              }))
            return true;
        }
        // Hole-free instances act on the context only.
        if (k < n) {
          for (TermId s : universe)
            for (TermId r : peers(right, s)) {
              Choice ch{RuleKind::Cng};
              ch.c0 = left;
              ch.a0 = h;
              ch.c1 = right;
              ch.a1 = store.equality(r, s);
              ch.r = r;
              ch.s = s;
              ch.index = k;
              if (two(std::move(ch))) return true;
            }
        }
      }
    }

    if (calc.cut == CutMode::ContextSharing) {
      for (AtomId a : formulas) {
        Choice ch{RuleKind::CutShared};
        ch.c0 = c;
        ch.a0 = a;
        ch.c1 = context(with_atom(g, a));
        ch.a1 = h;
        ch.formula = a;
        if (two(std::move(ch))) return true;
      }
    }

    if (calc.cut == CutMode::IndependentAtomic) {
      for (AtomId a : formulas) {
        for (std::size_t k = 0; k <= n; ++k) {
          Choice ch{RuleKind::Cut};
          ch.c0 = ctx_of(0, k);
          ch.a0 = a;
          ch.c1 = ctx_of(k, n, a);
          ch.a1 = h;
          ch.formula = a;
          ch.index = k;
          if (two(std::move(ch))) return true;
        }
      }
    }

    if (calc.contraction_allowed && n >= 1) {
      Choice ch{RuleKind::Contract};
      ch.c0 = context(with_atom(g, g[n - 1]));
      ch.a0 = h;
      if (one(std::move(ch))) return true;
    }

    if (!closable && exchanges()) return true;

    if (e.proved <= height) return true;
    e.fail = height;
    return false;
  }

  static std::vector<AtomId> with_atom(std::vector<AtomId> g, AtomId a) {
    g.push_back(a);
    return g;
  }

  // ---- relaxed refutation over multisets ---------------------------------

  CtxId multiset(std::vector<AtomId> atoms) {
    std::sort(atoms.begin(), atoms.end());
    return context(std::move(atoms));
  }

  static std::vector<AtomId> without(const std::vector<AtomId>& g, AtomId a) {
    std::vector<AtomId> out = g;
    out.erase(std::find(out.begin(), out.end(), a));
    return out;
  }

  // Every sub-multiset of g together with its complement.
  template <typename F>
  bool for_each_split(const std::vector<AtomId>& g, F&& f) {
    std::vector<std::pair<AtomId, int>> counts;
    for (AtomId a : g) {
      if (!counts.empty() && counts.back().first == a) {
        ++counts.back().second;
      } else {
        counts.emplace_back(a, 1);
      }
    }
    std::vector<int> take(counts.size(), 0);
    while (true) {
      std::vector<AtomId> left, right;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        for (int j = 0; j < counts[i].second; ++j) (j < take[i] ? left : right).push_back(counts[i].first);
      }
      if (f(left, right)) return true;
      std::size_t k = 0;
      while (k < counts.size() && ++take[k] > counts[k].second) take[k++] = 0;
      if (k == counts.size()) return false;
    }
  }

  bool relax(CtxId c, AtomId h, int height) {
    RelaxedEntry& e = relaxed[key(c, h)];
    if (e.proved <= height) return true;
    if (e.fail >= height) return false;
    ++stats.expansions;
    const std::vector<AtomId> g = ctxs[c];
    const std::size_t n = g.size();
    if ((n == 1 && g[0] == h) || (n == 0 && store.is_identity(h))) {
      e.proved = 0;
      return true;
    }
    if (height == 0) {
      e.fail = 0;
      return false;
    }
    const int sub = height - 1;
    auto done = [&](int p) {
      e.proved = std::min(e.proved, 1 + p);
      return true;
    };
    auto one = [&](CtxId c0, AtomId a0) {
      if (e.proved <= height) return true;
      if (!valid(c0, a0) || !relax(c0, a0, sub)) return false;
      return done(relaxed[key(c0, a0)].proved);
    };
    auto two = [&](CtxId c0, AtomId a0, CtxId c1, AtomId a1) {
      if (e.proved <= height) return true;
      if ((c0 == c && a0 == h) || (c1 == c && a1 == h)) return false;
      if (!valid(c1, a1) || !valid(c0, a0)) return false;
      if (!relax(c0, a0, sub) || !relax(c1, a1, sub)) return false;
      return done(std::max(relaxed[key(c0, a0)].proved, relaxed[key(c1, a1)].proved));
    };
    std::vector<AtomId> distinct = g;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    if (calc.weakening_allowed)
      for (AtomId x : distinct)
        if (one(multiset(without(g, x)), h)) return true;

    if (calc.eq_mechanism == EqMechanism::EqLeftPair) {
      for (AtomId x : distinct) {
        if (!store.is_equality(x)) continue;
        CtxId rest = multiset(without(g, x));
        for (int kind = 1; kind <= 2; ++kind) {
          TermId r = kind == 1 ? store.lhs(x) : store.rhs(x);
          TermId s = kind == 1 ? store.rhs(x) : store.lhs(x);
          if (for_each_hole_set(store.occurrences(h, s), !calc.weakening_allowed,
                                [&](const std::vector<Path>& holes) {
                                  return one(rest, store.substitute(h, holes, r));
                                }))
            return true;
        }
      }
    }

    if (calc.eq_mechanism == EqMechanism::CngShared) {
      for (TermId s : store.subterms(h)) {
        if (!universe_set.count(s)) continue;
        if (for_each_hole_set(store.occurrences(h, s), false, [&](const std::vector<Path>& holes) {
              for (TermId r : peers(c, s))
                if (r != s && two(c, store.substitute(h, holes, r), c, store.equality(r, s))) return true;
              return false;
            }))
          return true;
      }
    }

    if (calc.eq_mechanism == EqMechanism::Cng) {
      if (for_each_split(g, [&](const std::vector<AtomId>& l, const std::vector<AtomId>& rt) {
            CtxId left = multiset(l);
            CtxId right = multiset(rt);
            for (TermId s : store.subterms(h)) {
              if (!universe_set.count(s)) continue;
              if (for_each_hole_set(store.occurrences(h, s), false, [&](const std::vector<Path>& holes) {
                    for (TermId r : peers(right, s))
                      if (two(left, store.substitute(h, holes, r), right, store.equality(r, s))) return true;
                    return false;
                  }))
                return true;
            }
            if (!rt.empty())
              for (TermId s : universe)
                for (TermId r : peers(right, s))
                  if (two(left, h, right, store.equality(r, s))) return true;
            return false;
          }))
        return true;
    }

    if (calc.cut == CutMode::ContextSharing)
      for (AtomId a : formulas)
        if (two(c, a, multiset(with_atom(g, a)), h)) return true;

    if (calc.cut == CutMode::IndependentAtomic) {
      for (AtomId a : formulas) {
        if (for_each_split(g, [&](const std::vector<AtomId>& l, const std::vector<AtomId>& rt) {
              return two(multiset(l), a, multiset(with_atom(rt, a)), h);
            }))
          return true;
      }
    }

    if (calc.contraction_allowed)
      for (AtomId x : distinct)
        if (one(multiset(with_atom(g, x)), h)) return true;

    if (e.proved <= height) return true;
    e.fail = height;
    return false;
  }

  // ---- reconstruction ----------------------------------------------------

  Sequent sequent(CtxId c, AtomId h) const {
    Sequent s;
    for (AtomId a : ctxs[c]) s.antecedent.push_back(store.to_atom(a));
    s.succedent = store.to_atom(h);
    return s;
  }

  Derivation build(CtxId c, AtomId h) {
    const Choice ch = memo.at(key(c, h)).choice;
    Sequent concl = sequent(c, h);
    std::vector<Derivation> ps;
    if (ch.c0 >= 0) ps.push_back(build(ch.c0, ch.a0));
    if (ch.c1 >= 0) ps.push_back(build(ch.c1, ch.a1));
    Atom ha = store.to_atom(h);
    switch (ch.kind) {
      case RuleKind::Axiom: return Derivation(concl, rule::Axiom{});
      case RuleKind::Refl: return Derivation(concl, rule::Refl{ha.lhs()});
      case RuleKind::Weaken: return Derivation(concl, rule::Weaken{concl.antecedent.back()}, std::move(ps));
      case RuleKind::Exchange: return Derivation(concl, rule::Exchange{ch.index}, std::move(ps));
      case RuleKind::Contract: return Derivation(concl, rule::Contract{}, std::move(ps));
      case RuleKind::Cut:
        return Derivation(concl, rule::Cut{store.to_atom(ch.formula), ch.index}, std::move(ps));
      case RuleKind::CutShared: return Derivation(concl, rule::CutShared{store.to_atom(ch.formula)}, std::move(ps));
      case RuleKind::EqLeft1:
        return Derivation(concl, rule::EqLeft1{punch_holes(ha, ch.holes), store.to_term(ch.r), store.to_term(ch.s)},
                          std::move(ps));
      case RuleKind::EqLeft2:
        return Derivation(concl, rule::EqLeft2{punch_holes(ha, ch.holes), store.to_term(ch.r), store.to_term(ch.s)},
                          std::move(ps));
      case RuleKind::Cng:
        return Derivation(
            concl, rule::Cng{punch_holes(ha, ch.holes), store.to_term(ch.r), store.to_term(ch.s), ch.index},
            std::move(ps));
      case RuleKind::CngShared:
        return Derivation(concl,
                          rule::CngShared{punch_holes(ha, ch.holes), store.to_term(ch.r), store.to_term(ch.s)},
                          std::move(ps));
    }
    throw Error(ErrorKind::InternalError, "unknown rule in search memo");
  }

  SearchOutcome prove(const Sequent& goal) {
    if (memo.size() + relaxed.size() + validity.size() > memo_limit || closures.size() > closure_limit) {
      memo.clear();
      relaxed.clear();
      validity.clear();
      ctxs.clear();
      ctx_closure.clear();
      ctx_ids.clear();
      closures.clear();
      closure_ids.clear();
    }
    extend_universe(goal);
    if (universe.empty()) throw Error(ErrorKind::BoundsEmpty, "the term universe is empty");
    stats = SearchStats{};
    SearchOutcome out;
    out.bounds = bounds;

    std::vector<AtomId> atoms;
    for (const auto& a : goal.antecedent) atoms.push_back(store.atom(a));
    AtomId h = store.atom(goal.succedent);
    CtxId c = context(atoms);
    const int max = static_cast<int>(bounds.max_height);
    if (!valid(c, h)) {
      out.stats = stats;
      return out;
    }
    if (relaxed_enabled && !relax(multiset(atoms), h, max)) {
      stats.refuted_by_precheck = true;
      out.stats = stats;
      return out;
    }
    for (int height = shortest ? 0 : max; height <= max; ++height) {
      if (search(c, h, height)) {
        out.derivation = build(c, h);
        break;
      }
    }
    stats.states = memo.size() + relaxed.size();
    out.stats = stats;
    if (out.derivation && !checks(*out.derivation, calc))
      throw Error(ErrorKind::InternalError, "search produced a derivation that does not check");
    return out;
  }
};

Prover::Prover(const Calculus& calc, const SearchBounds& bounds, const Signature& sig, const SearchOptions& opts)
    : impl_(std::make_unique<Impl>(calc, bounds, sig, opts)) {}
Prover::~Prover() = default;
Prover::Prover(Prover&&) noexcept = default;
Prover& Prover::operator=(Prover&&) noexcept = default;

SearchOutcome Prover::prove(const Sequent& goal) { return impl_->prove(goal); }

SearchOutcome bounded_search(const Sequent& goal, const Calculus& calc, const SearchBounds& bounds,
                             const Signature& sig, const SearchOptions& opts) {
  return Prover(calc, bounds, sig, opts).prove(goal);
}

}  // namespace eqc
