#include "eqcalc/calculus.hpp"

namespace eqc {

Calculus Calculus::eqm() { return Calculus{EqMechanism::EqLeftPair, CutMode::IndependentAtomic, true, true, true}; }

Calculus Calculus::eqm_minus() {
  Calculus c = eqm();
  c.contraction_allowed = false;
  return c;
}

Calculus Calculus::eq() { return Calculus{EqMechanism::Cng, CutMode::IndependentAtomic, true, true, true}; }

Calculus Calculus::eqp() { return Calculus{EqMechanism::CngShared, CutMode::IndependentAtomic, true, true, true}; }

Calculus Calculus::cf(Calculus c) {
  c.cut = CutMode::None;
  return c;
}

Calculus Calculus::ccf(Calculus c) {
  c.cut = CutMode::None;
  c.contraction_allowed = false;
  return c;
}

Calculus Calculus::shared_cut(Calculus c) {
  if (c.cut == CutMode::IndependentAtomic) c.cut = CutMode::ContextSharing;
  return c;
}

// Grammar: [CF-|CCF-] (EQM|EQ|EQP) [-] [+shared-cut]
std::optional<Calculus> Calculus::from_name(std::string_view name) {
  bool shared = false;
  constexpr std::string_view kShared = "+shared-cut";
  if (name.size() > kShared.size() && name.substr(name.size() - kShared.size()) == kShared) {
    shared = true;
    name.remove_suffix(kShared.size());
  }
  enum { Full, CutFree, ContractionCutFree } prefix = Full;
  if (name.substr(0, 4) == "CCF-") {
    prefix = ContractionCutFree;
    name.remove_prefix(4);
  } else if (name.substr(0, 3) == "CF-") {
    prefix = CutFree;
    name.remove_prefix(3);
  }
  bool minus = false;
  if (!name.empty() && name.back() == '-') {
    minus = true;
    name.remove_suffix(1);
  }
  Calculus c;
  if (name == "EQM")
    c = eqm();
  else if (name == "EQ")
    c = eq();
  else if (name == "EQP")
    c = eqp();
  else
    return std::nullopt;
  if (minus) {
    if (prefix == ContractionCutFree) return std::nullopt;
    c.contraction_allowed = false;
  }
  if (prefix == CutFree) c = cf(c);
  if (prefix == ContractionCutFree) c = ccf(c);
  if (shared) {
    if (c.cut == CutMode::None) return std::nullopt;
    c = shared_cut(c);
  }
  return c;
}

std::string Calculus::name() const {
  if (!weakening_allowed || !exchange_allowed) return "custom";
  std::string base = eq_mechanism == EqMechanism::EqLeftPair ? "EQM"
                     : eq_mechanism == EqMechanism::Cng      ? "EQ"
                                                             : "EQP";
  if (cut == CutMode::None) return (contraction_allowed ? "CF-" : "CCF-") + base;
  std::string out = base;
  if (!contraction_allowed) out += "-";
  if (cut == CutMode::ContextSharing) out += "+shared-cut";
  return out;
}

std::vector<std::string> preset_names() {
  return {"EQM", "EQM-", "EQ", "EQP", "CF-EQ", "CF-EQM", "CF-EQP", "CCF-EQP"};
}

}  // namespace eqc
