#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqcalc/term.hpp"

namespace eqc {

// Incremental congruence closure over hash-consed term nodes. Inserting a
// term never merges two classes that existed before; merging keeps the
// relation closed under congruence.
class CongruenceIndex {
 public:
  using Node = int;

  // Node for sym(args...), created if absent. Symbols are caller-chosen ids.
  Node add_node(int sym, std::span<const Node> args);
  void merge(Node a, Node b);
  Node find(Node n) const;
  bool related(Node a, Node b) const { return find(a) == find(b); }
  std::size_t node_count() const { return parent_.size(); }

  // Term-level interface; symbols are interned by name.
  Node add(const Term& t);
  void merge(const Term& a, const Term& b);
  bool related(const Term& a, const Term& b);
  // The terms inserted through the term interface, indexed by node.
  const std::vector<Term>& terms() const { return terms_; }

 private:
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };
  std::vector<int> key(Node n) const;
  void process();

  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<int> sym_;
  std::vector<std::vector<int>> args_;
  std::vector<std::vector<int>> uses_;  // parents of each class root
  std::unordered_map<std::vector<int>, int, VecHash> exact_;
  std::unordered_map<std::vector<int>, int, VecHash> table_;
  std::vector<std::pair<int, int>> pending_;

  std::unordered_map<std::string, int> symbols_;
  std::vector<Term> terms_;
};

// All terms of depth at most `depth` over the signature's function symbols.
std::vector<Term> terms_up_to_depth(const Signature& sig, std::size_t depth);

// Smallest congruence over the subterms of eqs plus every signature term of
// depth at most universe_depth that contains the given equalities.
// Non-equality atoms are ignored.
CongruenceIndex congruence_closure(const std::vector<Atom>& eqs, const Signature& sig, std::size_t universe_depth);

// Semantic validity: an equality succedent whose sides are related, or a
// predicate succedent congruent argument-wise to an antecedent predicate.
bool valid(const Sequent& seq);

}  // namespace eqc
