#pragma once

#include <utility>

#include "tmkt/dispersion.hpp"
#include "tmkt/patch.hpp"

namespace tmkt {

/// Countries [0, L1] and [0, L2]; country 2 is mapped onto [0, L1] by
/// y = x L2/L1, so modes are lambda_k = (k pi / L1)^2.
class TwoCountryDomain {
 public:
  TwoCountryDomain(double L1, double L2, int k_max);

  [[nodiscard]] double L1() const { return L1_; }
  [[nodiscard]] double L2() const { return L2_; }
  [[nodiscard]] int k_max() const { return k_max_; }
  [[nodiscard]] double lambda(int k) const { return neumann_eigenvalue(k, L1_); }

 private:
  double L1_;
  double L2_;
  int k_max_;
};

/// Every coefficient scaled by (L1/L2)^2.
DiffusionMatrix2 rescale_diffusion(const DiffusionMatrix2& dhat2, double L1, double L2);

/// Block-diagonal diffusion for (u1, v1, u2, v2). Country 2 is stored in the
/// common coordinate (after rescaling).
class DiffusionMatrix4 {
 public:
  DiffusionMatrix4(DiffusionMatrix2 country1, DiffusionMatrix2 country2);
  /// Country 2 given in its own coordinate, rescaled onto [0, L1].
  static DiffusionMatrix4 from_native(const DiffusionMatrix2& country1,
                                      const DiffusionMatrix2& dhat2, double L1, double L2);

  [[nodiscard]] const DiffusionMatrix2& country1() const { return c1_; }
  [[nodiscard]] const DiffusionMatrix2& country2() const { return c2_; }
  [[nodiscard]] Matrix4 signed_matrix() const;
  /// Both blocks equal within `tol` (absolute, entrywise).
  [[nodiscard]] bool equal_blocks(double tol = 1e-12) const;

 private:
  DiffusionMatrix2 c1_;
  DiffusionMatrix2 c2_;
};

/// A_p + Gamma - lambda D4
Matrix4 mode_matrix4(const Matrix4& A_p, const Matrix4& gamma, const DiffusionMatrix4& D4,
                     double lambda);

/// (A_r - lambda D, B - lambda D). Requires equal diffusion blocks; throws
/// EqualDiffusionError naming condition d-k otherwise.
std::pair<Matrix2, Matrix2> factor_under_equal_diffusion(const Matrix4& A_p,
                                                         const Matrix4& gamma,
                                                         const DiffusionMatrix4& D4,
                                                         double lambda);

/// d12 bound from requiring the lambda-linear migration term of det(B - lambda D)
/// to be stabilizing:
/// (delta2 rho2(u) d11 + delta1 rho1(v) d22 + delta1 rho1'(v) u d21) / (-delta2 rho2'(u) v).
/// +infinity when the denominator vanishes and the numerator is >= 0.
double two_country_d12_bound(const KineticParams& p, const PatchParams& q,
                             const DiffusionMatrix2& D);

/// det(A_r - lambda D) and det(B - lambda D) as quadratics in lambda.
std::pair<Quadratic, Quadratic> mode_det_polynomials(const KineticParams& p,
                                                     const PatchParams& q,
                                                     const DiffusionMatrix2& D);

/// Full condition list for the two-country diffusion model: h:3rd, h:2rd,
/// h:4rd, h:7rd, plusmas, 1.feltetel, 2.feltetelujalak, rho, d-k,
/// pathdkepletmas, det1, det2. The reported spectrum is that of the least
/// stable mode over k = 0..k_max. Throws EqualDiffusionError when d-k fails.
StabilityReport check_thm44(const KineticParams& p, const PatchParams& q,
                            const DiffusionMatrix4& D4, const TwoCountryDomain& domain,
                            double eps = kDefaultMarginEps);

}  // namespace tmkt
