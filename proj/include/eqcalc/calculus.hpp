#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eqc {

enum class EqMechanism { EqLeftPair, Cng, CngShared };
enum class CutMode { IndependentAtomic, ContextSharing, None };

// A calculus is a set of feature flags over one shared rule vocabulary.
struct Calculus {
  EqMechanism eq_mechanism = EqMechanism::EqLeftPair;
  CutMode cut = CutMode::IndependentAtomic;
  bool contraction_allowed = true;
  bool weakening_allowed = true;
  bool exchange_allowed = true;

  friend bool operator==(const Calculus&, const Calculus&) = default;

  static Calculus eqm();        // EQ_M
  static Calculus eqm_minus();  // EQ_M without contraction
  static Calculus eq();         // EQ
  static Calculus eqp();        // EQ' (context-sharing congruence)
  static Calculus cf(Calculus c);   // cut removed
  static Calculus ccf(Calculus c);  // cut and contraction removed
  static Calculus shared_cut(Calculus c);  // independent cut replaced by context-sharing cut

  // Command-line names: EQM, EQM-, EQ, EQP, CF-EQ, CF-EQM, CF-EQP, CCF-EQP.
  // A `+shared-cut` suffix selects the context-sharing cut variant.
  static std::optional<Calculus> from_name(std::string_view name);
  std::string name() const;
};

// Preset names in their canonical spelling.
std::vector<std::string> preset_names();

}  // namespace eqc
