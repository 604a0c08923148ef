#include "tmkt/patch_pde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tmkt/error.hpp"

namespace tmkt {

TwoCountryDomain::TwoCountryDomain(double L1, double L2, int k_max)
    : L1_(L1), L2_(L2), k_max_(k_max) {
  if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2)) {
    throw PreconditionError("country lengths must be > 0");
  }
  if (k_max < 0) throw PreconditionError("k_max must be >= 0");
}

DiffusionMatrix2 rescale_diffusion(const DiffusionMatrix2& dhat2, double L1, double L2) {
  if (!(L1 > 0.0) || !(L2 > 0.0)) throw PreconditionError("country lengths must be > 0");
  const double s = (L1 / L2) * (L1 / L2);
  return {s * dhat2.d11(), s * dhat2.d12(), s * dhat2.d21(), s * dhat2.d22()};
}

DiffusionMatrix4::DiffusionMatrix4(DiffusionMatrix2 country1, DiffusionMatrix2 country2)
    : c1_(country1), c2_(country2) {}

DiffusionMatrix4 DiffusionMatrix4::from_native(const DiffusionMatrix2& country1,
                                               const DiffusionMatrix2& dhat2, double L1,
                                               double L2) {
  return {country1, rescale_diffusion(dhat2, L1, L2)};
}

Matrix4 DiffusionMatrix4::signed_matrix() const {
  return Matrix4::block_diagonal(c1_.signed_matrix(), c2_.signed_matrix());
}

bool DiffusionMatrix4::equal_blocks(double tol) const {
  return max_abs_diff(c1_.signed_matrix(), c2_.signed_matrix()) <= tol;
}

Matrix4 mode_matrix4(const Matrix4& A_p, const Matrix4& gamma, const DiffusionMatrix4& D4,
                     double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("mode eigenvalue must be >= 0");
  return A_p + gamma - lambda * D4.signed_matrix();
}

std::pair<Matrix2, Matrix2> factor_under_equal_diffusion(const Matrix4& A_p,
                                                         const Matrix4& gamma,
                                                         const DiffusionMatrix4& D4,
                                                         double lambda) {
  if (!D4.equal_blocks()) {
    throw EqualDiffusionError(
        "condition d-k violated: the two countries' diffusion blocks differ, "
        "so the determinant does not factor");
  }
  if (!(lambda >= 0.0)) throw PreconditionError("mode eigenvalue must be >= 0");
  const auto [A, B] = block_factor(A_p, gamma);
  const Matrix2 LD = lambda * D4.country1().signed_matrix();
  return {A - LD, B - LD};
}

double two_country_d12_bound(const KineticParams& p, const PatchParams& q,
                             const DiffusionMatrix2& D) {
  const State2 eq = interior_equilibrium(Model::ratio, p);
  const double num = q.delta2() * q.rho2().value(eq.u) * D.d11() +
                     q.delta1() * q.rho1().value(eq.v) * D.d22() +
                     q.delta1() * q.rho1().derivative(eq.v) * eq.u * D.d21();
  const double den = -q.delta2() * q.rho2().derivative(eq.u) * eq.v;
  if (den > 0.0) return num / den;
  if (den == 0.0) {
    return num >= 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  // rho2' > 0 at the equilibrium; the rho condition fails in that case.
  return num / den;
}

std::pair<Quadratic, Quadratic> mode_det_polynomials(const KineticParams& p,
                                                     const PatchParams& q,
                                                     const DiffusionMatrix2& D) {
  const State2 eq = interior_equilibrium(Model::ratio, p);
  const Matrix2 A = interior_jacobian(Model::ratio, p);
  const Matrix2 B = A - 2.0 * migration_block(q, eq);
  return {mode_det_polynomial(A, D), mode_det_polynomial(B, D)};
}

StabilityReport check_thm44(const KineticParams& p, const PatchParams& q,
                            const DiffusionMatrix4& D4, const TwoCountryDomain& domain,
                            double eps) {
  if (!D4.equal_blocks()) {
    throw EqualDiffusionError(
        "condition d-k violated: unequal diffusion blocks are not covered by the "
        "two-country stability analysis");
  }
  const DiffusionMatrix2& D = D4.country1();
  StabilityReport report;
  report.conditions = ratio_kinetic_conditions(p);
  report.interior_equilibrium = interior_is_positive(Model::ratio, p);
  const State2 eq = interior_equilibrium(Model::ratio, p);
  if (!report.interior_equilibrium) report.notes.emplace_back("no interior equilibrium");

  if (p.m() > p.d()) {
    const double bound =
        sufficient_d12_bound(Model::ratio, p, DiffusionPartial{D.d11(), D.d21(), D.d22()});
    report.conditions.push_back(less_than(ConditionId::h7rd, D.d12(), bound));
  } else {
    report.conditions.push_back({ConditionId::h7rd, false, -1.0});
  }
  report.conditions.push_back(feltetel1_condition(q, eq));
  report.conditions.push_back(feltetel2ujalak_condition(q, eq));
  report.conditions.push_back(migration_shape_condition(q, eq));
  report.conditions.push_back({ConditionId::dk, true, 0.0});
  report.conditions.push_back(
      less_than(ConditionId::pathdkepletmas, D.d12(), two_country_d12_bound(p, q, D)));

  const auto [det1, det2] = mode_det_polynomials(p, q, D);
  const auto poly_condition = [](ConditionId id, const Quadratic& poly) {
    const double lowest = poly.min_nonnegative();
    const double scale = std::abs(poly.c0) > 0.0 ? std::abs(poly.c0) : 1.0;
    return ConditionResult{id, poly.positive_on_nonnegative(), lowest / scale};
  };
  report.conditions.push_back(poly_condition(ConditionId::det1, det1));
  report.conditions.push_back(poly_condition(ConditionId::det2, det2));
  if (det1.positive_on_nonnegative() && !det1.coefficient_signs_positive()) {
    report.notes.emplace_back("det1 positive on lambda >= 0 but not by coefficient signs");
  }
  if (det2.positive_on_nonnegative() && !det2.coefficient_signs_positive()) {
    report.notes.emplace_back("det2 positive on lambda >= 0 but not by coefficient signs");
  }

  const Matrix4 A_p = patch_jacobian(p);
  const Matrix4 gamma = gamma_matrix(q, eq);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= domain.k_max(); ++k) {
    const auto [Ak, Bk] = factor_under_equal_diffusion(A_p, gamma, D4, domain.lambda(k));
    const auto ea = eigenvalues(Ak);
    const auto eb = eigenvalues(Bk);
    const std::vector<Complex> spectrum{ea[0], ea[1], eb[0], eb[1]};
    const double re = max_real_part(spectrum);
    if (re > worst) {
      worst = re;
      report.eigenvalues = spectrum;
      report.mode = k;
    }
  }
  report.verdict = classify_spectrum(report.eigenvalues, eps);
  return report;
}

}  // namespace tmkt
