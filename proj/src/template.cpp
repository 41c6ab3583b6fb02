#include "eqcalc/template.hpp"

#include <algorithm>

namespace eqc {

Pattern Pattern::from_term(const Term& t) {
  Pattern p{t.head, {}};
  p.args.reserve(t.args.size());
  for (const auto& a : t.args) p.args.push_back(from_term(a));
  return p;
}

bool operator==(const Pattern& a, const Pattern& b) { return a.head == b.head && a.args == b.args; }

std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) {
  if (auto c = a.head <=> b.head; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Template Template::from_atom(const Atom& a) {
  Template t;
  t.kind = a.kind;
  t.name = a.name;
  for (const auto& arg : a.args) t.args.push_back(Pattern::from_term(arg));
  return t;
}

namespace {

void collect_holes(const Pattern& p, Path& path, std::vector<Path>& out) {
  if (p.is_hole()) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    path.push_back(i);
    collect_holes(p.args[i], path, out);
    path.pop_back();
  }
}

Term fill(const Pattern& p, const Term& t) {
  if (p.is_hole()) return t;
  Term out(p.head);
  out.args.reserve(p.args.size());
  for (const auto& a : p.args) out.args.push_back(fill(a, t));
  return out;
}

// Patterns q with q{r} = p and q{s} = c.
std::vector<Pattern> match_terms(const Term& p, const Term& c, const Term& r, const Term& s) {
  std::vector<Pattern> out;
  if (p == r && c == s) out.push_back(Pattern::hole());
  if (p.head == c.head && p.args.size() == c.args.size()) {
    std::vector<std::vector<Pattern>> choices;
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      choices.push_back(match_terms(p.args[i], c.args[i], r, s));
      if (choices.back().empty()) return out;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      Pattern node{p.head, {}};
      for (std::size_t i = 0; i < choices.size(); ++i) node.args.push_back(choices[i][idx[i]]);
      out.push_back(std::move(node));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

void render_pattern(const Pattern& p, std::string& out, bool infix) {
  if (p.args.empty()) {
    out += p.head;
    return;
  }
  if (infix) {
    out += p.head + "(";
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (i) out += ',';
      render_pattern(p.args[i], out, true);
    }
    out += ')';
  } else {
    out += "(" + p.head;
    for (const auto& a : p.args) {
      out += ' ';
      render_pattern(a, out, false);
    }
    out += ')';
  }
}

}  // namespace

std::vector<Path> Template::hole_paths() const {
  std::vector<Path> out;
  Path path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    path.push_back(i);
    collect_holes(args[i], path, out);
    path.pop_back();
  }
  return out;
}

bool operator==(const Template& a, const Template& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

std::strong_ordering operator<=>(const Template& a, const Template& b) {
  if (a.kind != b.kind) return a.kind == Atom::Kind::Equality ? std::strong_ordering::less
                                                               : std::strong_ordering::greater;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Atom apply_template(const Template& tpl, const Term& t) {
  Atom a;
  a.kind = tpl.kind;
  a.name = tpl.name;
  a.args.reserve(tpl.args.size());
  for (const auto& p : tpl.args) a.args.push_back(fill(p, t));
  return a;
}

std::vector<Template> match_replacement(const Atom& premise, const Atom& conclusion,
                                        const Term& r, const Term& s) {
  std::vector<Template> out;
  if (premise.kind != conclusion.kind || premise.name != conclusion.name ||
      premise.args.size() != conclusion.args.size())
    return out;
  std::vector<std::vector<Pattern>> choices;
  for (std::size_t i = 0; i < premise.args.size(); ++i) {
    choices.push_back(match_terms(premise.args[i], conclusion.args[i], r, s));
    if (choices.back().empty()) return out;
  }
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    Template tpl;
    tpl.kind = premise.kind;
    tpl.name = premise.name;
    for (std::size_t i = 0; i < choices.size(); ++i) tpl.args.push_back(choices[i][idx[i]]);
    out.push_back(std::move(tpl));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void collect_occurrences(const Term& t, const Term& target, Path& path, std::vector<Path>& out) {
  if (t == target) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    path.push_back(i);
    collect_occurrences(t.args[i], target, path, out);
    path.pop_back();
  }
}

Pattern punch(const Term& t, Path& path, const std::vector<Path>& holes) {
  if (std::find(holes.begin(), holes.end(), path) != holes.end()) return Pattern::hole();
  Pattern p{t.head, {}};
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    path.push_back(i);
    p.args.push_back(punch(t.args[i], path, holes));
    path.pop_back();
  }
  return p;
}

}  // namespace

std::vector<Path> occurrences(const Atom& a, const Term& t) {
  std::vector<Path> out;
  Path path;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    path.push_back(i);
    collect_occurrences(a.args[i], t, path, out);
    path.pop_back();
  }
  return out;
}

Template punch_holes(const Atom& a, const std::vector<Path>& holes) {
  Template tpl;
  tpl.kind = a.kind;
  tpl.name = a.name;
  Path path;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    path.push_back(i);
    tpl.args.push_back(punch(a.args[i], path, holes));
    path.pop_back();
  }
  return tpl;
}

std::string to_sexpr(const Pattern& p) {
  std::string out;
  render_pattern(p, out, false);
  return out;
}

std::string to_sexpr(const Template& tpl) {
  std::string out;
  if (tpl.is_equality()) {
    out = "(= " + to_sexpr(tpl.args[0]) + " " + to_sexpr(tpl.args[1]) + ")";
    return out;
  }
  if (tpl.args.empty()) return tpl.name;
  out = "(" + tpl.name;
  for (const auto& a : tpl.args) out += " " + to_sexpr(a);
  return out + ")";
}

std::string to_string(const Template& tpl) {
  std::string out;
  if (tpl.is_equality()) {
    render_pattern(tpl.args[0], out, true);
    out += '=';
    render_pattern(tpl.args[1], out, true);
    return out;
  }
  out += tpl.name;
  if (tpl.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < tpl.args.size(); ++i) {
    if (i) out += ',';
    render_pattern(tpl.args[i], out, true);
  }
  return out + ")";
}

}  // namespace eqc
