#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmkt/linalg.hpp"

namespace tmkt {

/// Eigenvalues whose real part lies within this distance of the imaginary
/// axis make a verdict marginal.
inline constexpr double kDefaultMarginEps = 1e-10;

enum class Verdict { stable, unstable, marginal };

std::string_view to_string(Verdict v);

/// Fixed registry of stability conditions. Labels are the external ids used
/// in JSON reports and sweep CSV headers.
enum class ConditionId {
  h2,                // K > d/m                         (simple model, positive interior state)
  h5,                // d12 below the simple-model bound
  h3rd,              // m - d > 0
  h2rd,              // r > (m - d)/a
  h4rd,              // a > 1
  plusmas,           // r > (m - d)/a * (1 + d/m)
  h7rd,              // d12 below the ratio-model bound
  det_d,             // det D > 0 (well-posed diffusion)
  rho,               // rho_i > 0, rho_i' <= 0 at the equilibrium
  sign,              // a_r12 - 2 delta1 rho1'(v) u < 0
  p5,                // delta1 below the capital-migration bound
  feltetel1,         // 1 > (rho1' u / rho1)(rho2' v / rho2)
  feltetel2ujalak,   // -1/v < rho1'/rho1
  dk,                // equal diffusion blocks in both countries
  det1,              // det(A_r - lambda D) > 0 for all lambda >= 0
  det2,              // det(B - lambda D) > 0 for all lambda >= 0
  pathdkepletmas,    // d12 below the two-country bound
};

std::string_view label(ConditionId id);
std::optional<ConditionId> condition_from_label(std::string_view text);
std::span<const ConditionId> all_conditions();

/// One evaluated inequality. `margin` is the signed slack, positive iff the
/// inequality holds, normalized by |rhs| when rhs is finite and nonzero.
struct ConditionResult {
  ConditionId id;
  bool holds = false;
  double margin = 0.0;
};

/// lhs > rhs
ConditionResult greater_than(ConditionId id, double lhs, double rhs);
/// lhs < rhs
ConditionResult less_than(ConditionId id, double lhs, double rhs);

struct StabilityReport {
  std::vector<ConditionResult> conditions;
  std::vector<Complex> eigenvalues;
  Verdict verdict = Verdict::marginal;
  bool interior_equilibrium = true;
  /// Mode index whose spectrum is reported, for per-mode analyses.
  std::optional<int> mode;
  std::vector<std::string> notes;

  [[nodiscard]] const ConditionResult* find(ConditionId id) const;
  [[nodiscard]] bool holds(ConditionId id) const;
  [[nodiscard]] bool all_hold(std::span<const ConditionId> ids) const;
  [[nodiscard]] bool all_hold() const;
};

Verdict classify_spectrum(std::span<const Complex> values,
                          double eps = kDefaultMarginEps);

}  // namespace tmkt
