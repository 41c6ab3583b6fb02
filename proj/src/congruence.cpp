#include "eqcalc/congruence.hpp"

#include <utility>

namespace eqc {

std::size_t CongruenceIndex::VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = v.size();
  for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
  return h;
}

CongruenceIndex::Node CongruenceIndex::find(Node n) const {
  while (parent_[n] != n) n = parent_[n];
  return n;
}

std::vector<int> CongruenceIndex::key(Node n) const {
  std::vector<int> k{sym_[n]};
  for (int a : args_[n]) k.push_back(find(a));
  return k;
}

CongruenceIndex::Node CongruenceIndex::add_node(int sym, std::span<const Node> args) {
  std::vector<int> exact{sym};
  exact.insert(exact.end(), args.begin(), args.end());
  if (auto it = exact_.find(exact); it != exact_.end()) return it->second;

  Node n = static_cast<Node>(parent_.size());
  parent_.push_back(n);
  rank_.push_back(0);
  sym_.push_back(sym);
  args_.emplace_back(args.begin(), args.end());
  uses_.emplace_back();
  exact_.emplace(std::move(exact), n);
  for (int a : args) uses_[find(a)].push_back(n);

  std::vector<int> k = key(n);
  if (auto it = table_.find(k); it != table_.end()) {
    pending_.emplace_back(n, it->second);
    process();
  } else {
    table_.emplace(std::move(k), n);
  }
  return n;
}

void CongruenceIndex::merge(Node a, Node b) {
  pending_.emplace_back(a, b);
  process();
}

void CongruenceIndex::process() {
  while (!pending_.empty()) {
    auto [a, b] = pending_.back();
    pending_.pop_back();
    a = find(a);
    b = find(b);
    if (a == b) continue;
    if (rank_[a] > rank_[b]) std::swap(a, b);
    if (rank_[a] == rank_[b]) ++rank_[b];
    parent_[a] = b;
    std::vector<int> moved = std::move(uses_[a]);
    uses_[a].clear();
    for (int p : moved) {
      std::vector<int> k = key(p);
      auto it = table_.find(k);
      if (it != table_.end() && find(it->second) != find(p)) {
        pending_.emplace_back(p, it->second);
      } else if (it == table_.end()) {
        table_.emplace(std::move(k), p);
      }
      uses_[b].push_back(p);
    }
  }
}

CongruenceIndex::Node CongruenceIndex::add(const Term& t) {
  std::vector<Node> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(add(a));
  auto [it, fresh] = symbols_.emplace(t.head, static_cast<int>(symbols_.size()));
  (void)fresh;
  std::size_t before = parent_.size();
  Node n = add_node(it->second, args);
  if (parent_.size() > before) terms_.push_back(t);
  return n;
}

void CongruenceIndex::merge(const Term& a, const Term& b) { merge(add(a), add(b)); }

bool CongruenceIndex::related(const Term& a, const Term& b) {
  Node x = add(a);
  Node y = add(b);
  return related(x, y);
}

std::vector<Term> terms_up_to_depth(const Signature& sig, std::size_t depth) {
  std::vector<Term> out;
  for (const auto& [name, arity] : sig.functions())
    if (arity == 0) out.emplace_back(name);
  std::size_t level_start = 0;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::size_t level_end = out.size();
    std::vector<Term> next;
    for (const auto& [name, arity] : sig.functions()) {
      if (arity == 0) continue;
      // Argument tuples over all shallower terms with at least one argument
      // from the previous level, so every term is produced once.
      std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
      while (true) {
        bool fresh = false;
        for (std::size_t i : idx) fresh = fresh || i >= level_start;
        if (fresh) {
          Term t(name);
          for (std::size_t i : idx) t.args.push_back(out[i]);
          next.push_back(std::move(t));
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == level_end) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    level_start = level_end;
    for (auto& t : next) out.push_back(std::move(t));
  }
  return out;
}

CongruenceIndex congruence_closure(const std::vector<Atom>& eqs, const Signature& sig, std::size_t universe_depth) {
  CongruenceIndex idx;
  for (const auto& t : terms_up_to_depth(sig, universe_depth)) idx.add(t);
  for (const auto& e : eqs)
    if (e.is_equality()) idx.merge(e.lhs(), e.rhs());
  return idx;
}

bool valid(const Sequent& seq) {
  CongruenceIndex idx;
  for (const auto& a : seq.antecedent)
    if (a.is_equality()) idx.merge(a.lhs(), a.rhs());
  const Atom& h = seq.succedent;
  if (h.is_equality()) return idx.related(h.lhs(), h.rhs());
  for (const auto& a : seq.antecedent) {
    if (a.is_equality() || a.name != h.name || a.args.size() != h.args.size()) continue;
    bool all = true;
    for (std::size_t i = 0; i < a.args.size() && all; ++i) all = idx.related(a.args[i], h.args[i]);
    if (all) return true;
  }
  return false;
}

}  // namespace eqc
