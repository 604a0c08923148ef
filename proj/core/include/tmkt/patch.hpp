#pragma once

#include <utility>

#include "tmkt/kinetics.hpp"
#include "tmkt/linalg.hpp"
#include "tmkt/migration.hpp"
#include "tmkt/report.hpp"

namespace tmkt {

/// Cross-country migration: capital velocity delta1 with rho1(v), labour
/// velocity delta2 with rho2(u). Both countries share one set of kinetics.
class PatchParams {
 public:
  PatchParams(double delta1, double delta2, MigrationFunction rho1, MigrationFunction rho2);

  [[nodiscard]] double delta1() const { return delta1_; }
  [[nodiscard]] double delta2() const { return delta2_; }
  [[nodiscard]] const MigrationFunction& rho1() const { return rho1_; }
  [[nodiscard]] const MigrationFunction& rho2() const { return rho2_; }

 private:
  double delta1_;
  double delta2_;
  MigrationFunction rho1_;
  MigrationFunction rho2_;
};

struct State4 {
  double u1 = 0.0;
  double v1 = 0.0;
  double u2 = 0.0;
  double v2 = 0.0;
};

/// Whether the local kinetic terms are included; disabling them isolates the
/// migration exchange.
enum class Reaction { enabled, disabled };

/// Two-patch ODE: ratio-dependent kinetics in each country plus the
/// antisymmetric exchange delta1 (rho1(v_j) u_j - rho1(v_i) u_i),
/// delta2 (rho2(u_j) v_j - rho2(u_i) v_i).
State4 patch_rhs(const KineticParams& p, const PatchParams& q, const State4& s,
                 Reaction reaction = Reaction::enabled);

/// G = [[delta1 rho1(v), delta1 rho1'(v) u], [delta2 rho2'(u) v, delta2 rho2(u)]]
/// evaluated at the interior state (u, v).
Matrix2 migration_block(const PatchParams& q, State2 eq);

/// Gamma = [[-G, G], [G, -G]]
Matrix4 gamma_matrix(const PatchParams& q, State2 eq);

/// A_p = diag(A_r, A_r)
Matrix4 patch_jacobian(const KineticParams& p);

/// Splits A_p + Gamma into (A_r, B = A_r - 2G), whose spectra together form
/// the spectrum of A_p + Gamma. Throws PreconditionError if A_p is not
/// block-diagonal with equal blocks or Gamma lacks the [[-G, G], [G, -G]]
/// pattern (tolerance 1e-12).
std::pair<Matrix2, Matrix2> block_factor(const Matrix4& A_p, const Matrix4& gamma);

/// -d^2 / (2 rho1'(v) u m); +infinity when rho1' == 0.
double delta1_bound(const KineticParams& p, const PatchParams& q);

/// Sign-stability route: h:3rd, h:2rd, h:4rd, plusmas, rho, sign, p:5.
StabilityReport check_thm42(const KineticParams& p, const PatchParams& q,
                            double eps = kDefaultMarginEps);

/// Determinant route: h:3rd, plusmas, 1.feltetel, 2.feltetelujalak, rho.
StabilityReport check_thm43(const KineticParams& p, const PatchParams& q,
                            double eps = kDefaultMarginEps);

/// The rho condition (rho_i > 0, rho_i' <= 0 at the equilibrium) shared by
/// the two-country checks.
ConditionResult migration_shape_condition(const PatchParams& q, State2 eq);
ConditionResult feltetel1_condition(const PatchParams& q, State2 eq);
ConditionResult feltetel2ujalak_condition(const PatchParams& q, State2 eq);

}  // namespace tmkt
