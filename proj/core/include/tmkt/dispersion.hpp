#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tmkt/kinetics.hpp"
#include "tmkt/linalg.hpp"
#include "tmkt/report.hpp"

namespace tmkt {

/// Self-diffusion d11, d22 and cross-diffusion d12, d21, all >= 0. The
/// operator acting on (u, v) is [[d11, -d12], [-d21, d22]]; construction
/// requires d11*d22 - d12*d21 > 0.
class DiffusionMatrix2 {
 public:
  DiffusionMatrix2(double d11, double d12, double d21, double d22);

  [[nodiscard]] double d11() const { return d11_; }
  [[nodiscard]] double d12() const { return d12_; }
  [[nodiscard]] double d21() const { return d21_; }
  [[nodiscard]] double d22() const { return d22_; }

  [[nodiscard]] double det() const { return d11_ * d22_ - d12_ * d21_; }
  [[nodiscard]] double trace() const { return d11_ + d22_; }
  /// [[d11, -d12], [-d21, d22]]
  [[nodiscard]] Matrix2 signed_matrix() const { return {d11_, -d12_, -d21_, d22_}; }
  /// Largest row sum of absolute entries.
  [[nodiscard]] double max_row_sum() const;

  friend bool operator==(const DiffusionMatrix2&, const DiffusionMatrix2&) = default;

 private:
  double d11_;
  double d12_;
  double d21_;
  double d22_;
};

/// The coefficients that stay fixed while d12 is varied.
struct DiffusionPartial {
  double d11 = 0.0;
  double d21 = 0.0;
  double d22 = 0.0;
};

/// Interval [0, L] with Neumann modes lambda_k = (k pi / L)^2, k = 0..k_max.
class SpatialDomain {
 public:
  SpatialDomain(double L, int k_max);

  [[nodiscard]] double length() const { return L_; }
  [[nodiscard]] int k_max() const { return k_max_; }
  [[nodiscard]] double lambda(int k) const;

 private:
  double L_;
  int k_max_;
};

/// lambda_k = (k pi / L)^2
double neumann_eigenvalue(int k, double L);

/// A - lambda * [[d11, -d12], [-d21, d22]]
Matrix2 mode_matrix(const Matrix2& A, const DiffusionMatrix2& D, double lambda);

/// det(A - lambda D) as a quadratic in lambda:
/// det A - lambda (a11 d22 + a22 d11 + a12 d21 + a21 d12) + lambda^2 det D.
/// Takes raw coefficients so it stays usable outside the det D > 0 region.
Quadratic mode_det_polynomial(const Matrix2& A, double d11, double d12, double d21,
                              double d22);
Quadratic mode_det_polynomial(const Matrix2& A, const DiffusionMatrix2& D);

/// The coefficient multiplying -lambda in det(A - lambda D).
double linear_coefficient(const Matrix2& A, double d11, double d12, double d21,
                          double d22);

struct DispersionPoint {
  int k = 0;
  double lambda = 0.0;
  double trace = 0.0;
  double det = 0.0;
  double max_re = 0.0;
};

struct DispersionCurve {
  std::vector<DispersionPoint> points;
  /// Trace strictly decreasing in lambda (holds whenever d11 + d22 > 0).
  bool trace_decreasing = true;
};

DispersionCurve dispersion_scan(const Matrix2& A, const DiffusionMatrix2& D,
                                const SpatialDomain& domain);

/// CSV with header `k,lambda_k,trace,det,max_re_eig`.
void write_csv(std::ostream& os, const DispersionCurve& curve);

/// Largest d12 for which the lambda-linear coefficient of det(A - lambda D)
/// stays negative, in closed form for each model. Throws PreconditionError
/// when the denominator is not positive (simple: r(1 - d/(Km)) <= 0,
/// ratio: m <= d).
double sufficient_d12_bound(Model model, const KineticParams& p, const DiffusionPartial& D);

/// Same bound read off a kinetic matrix: -(a11 d22 + a22 d11 + a12 d21)/a21.
/// Requires a21 > 0.
double sufficient_d12_bound(const Matrix2& A, const DiffusionPartial& D);

/// h:5 (simple) or h:7rd (ratio) followed by detD, scored from raw
/// coefficients so that points with det D <= 0 still get margins. The bound
/// condition fails with margin -1 when its denominator is not positive.
std::vector<ConditionResult> cross_diffusion_conditions(Model model, const KineticParams& p,
                                                        double d11, double d12, double d21,
                                                        double d22);

/// Smallest d12 at which min over continuous lambda >= 0 of det(A - lambda D)
/// reaches zero, searched below the det D > 0 ceiling d11 d22 / d21. Returns
/// nullopt when no such d12 exists. Throws PreconditionError unless
/// trace A < 0 and det A > 0.
std::optional<double> exact_turing_threshold(const Matrix2& A, const DiffusionPartial& D);

/// Continuous minimizer lambda* of det(A - lambda D) over lambda >= 0.
double critical_lambda(const Matrix2& A, const DiffusionMatrix2& D);

/// ceil(L sqrt(lambda_hi)/pi) with lambda_hi = 10 sqrt(det A/det D).
int default_k_max(const Matrix2& A, const DiffusionMatrix2& D, double L);

struct TuringReport {
  bool kinetically_stable = false;
  bool stable_sufficient = false;
  std::optional<double> d12_sufficient_bound;
  std::optional<double> d12_exact_threshold;
  /// argmin_k det(A - lambda_k D) when that minimum is negative.
  std::optional<int> critical_mode;
  /// Mode with the largest eigenvalue real part (smallest k on ties).
  int least_stable_mode = 0;
  double max_re = 0.0;
  Verdict verdict = Verdict::marginal;
  DispersionCurve curve;
};

TuringReport classify(const Matrix2& A, const DiffusionMatrix2& D,
                      const SpatialDomain& domain, double eps = kDefaultMarginEps);

}  // namespace tmkt
