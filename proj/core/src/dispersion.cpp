#include "tmkt/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tmkt/error.hpp"
#include "tmkt/format.hpp"

namespace tmkt {

DiffusionMatrix2::DiffusionMatrix2(double d11, double d12, double d21, double d22)
    : d11_(d11), d12_(d12), d21_(d21), d22_(d22) {
  for (double c : {d11, d12, d21, d22}) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw PreconditionError("diffusion coefficients must be finite and >= 0");
    }
  }
  if (!(det() > 0.0)) {
    std::ostringstream os;
    os << "diffusion matrix must satisfy d11*d22 - d12*d21 > 0, got " << det();
    throw PreconditionError(os.str());
  }
}

double DiffusionMatrix2::max_row_sum() const {
  return std::max(d11_ + d12_, d21_ + d22_);
}

SpatialDomain::SpatialDomain(double L, int k_max) : L_(L), k_max_(k_max) {
  if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("domain length must be > 0");
  if (k_max < 0) throw PreconditionError("k_max must be >= 0");
}

double SpatialDomain::lambda(int k) const { return neumann_eigenvalue(k, L_); }

double neumann_eigenvalue(int k, double L) {
  const double w = k * std::numbers::pi / L;
  return w * w;
}

Matrix2 mode_matrix(const Matrix2& A, const DiffusionMatrix2& D, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("mode eigenvalue must be >= 0");
  return A - lambda * D.signed_matrix();
}

double linear_coefficient(const Matrix2& A, double d11, double d12, double d21, double d22) {
  return A.a11 * d22 + A.a22 * d11 + A.a12 * d21 + A.a21 * d12;
}

Quadratic mode_det_polynomial(const Matrix2& A, double d11, double d12, double d21,
                              double d22) {
  return {A.det(), -linear_coefficient(A, d11, d12, d21, d22), d11 * d22 - d12 * d21};
}

Quadratic mode_det_polynomial(const Matrix2& A, const DiffusionMatrix2& D) {
  return mode_det_polynomial(A, D.d11(), D.d12(), D.d21(), D.d22());
}

DispersionCurve dispersion_scan(const Matrix2& A, const DiffusionMatrix2& D,
                                const SpatialDomain& domain) {
  DispersionCurve curve;
  curve.points.reserve(static_cast<std::size_t>(domain.k_max()) + 1);
  for (int k = 0; k <= domain.k_max(); ++k) {
    const double lambda = domain.lambda(k);
    const Matrix2 M = mode_matrix(A, D, lambda);
    const auto ev = eigenvalues(M);
    curve.points.push_back({k, lambda, M.trace(), M.det(), max_real_part(ev)});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].trace < curve.points[i - 1].trace)) curve.trace_decreasing = false;
  }
  return curve;
}

void write_csv(std::ostream& os, const DispersionCurve& curve) {
  os << "k,lambda_k,trace,det,max_re_eig\n";
  for (const auto& pt : curve.points) {
    os << pt.k << ',' << format_double(pt.lambda) << ',' << format_double(pt.trace) << ','
       << format_double(pt.det) << ',' << format_double(pt.max_re) << '\n';
  }
}

double sufficient_d12_bound(Model model, const KineticParams& p, const DiffusionPartial& D) {
  const double r = p.r(), K = p.K(), m = p.m(), d = p.d(), a = p.a();
  if (model == Model::simple) {
    const double denom = r * (1.0 - d / (K * m));
    if (!(denom > 0.0)) {
      throw PreconditionError("simple-model d12 bound needs r(1 - d/(Km)) > 0 (K > d/m)");
    }
    return (d * r / (K * m) * D.d22 + d * D.d21) / denom;
  }
  if (!(m > d)) throw PreconditionError("ratio-model d12 bound needs m > d");
  const double md = m - d;
  return a * d / md * D.d11 + a * d * d / (md * md) * D.d21 +
         (-(m + d) / md + a * m * r / (md * md)) * D.d22;
}

double sufficient_d12_bound(const Matrix2& A, const DiffusionPartial& D) {
  if (!(A.a21 > 0.0)) throw PreconditionError("d12 bound from a kinetic matrix needs a21 > 0");
  return -(A.a11 * D.d22 + A.a22 * D.d11 + A.a12 * D.d21) / A.a21;
}

std::vector<ConditionResult> cross_diffusion_conditions(Model model, const KineticParams& p,
                                                        double d11, double d12, double d21,
                                                        double d22) {
  const ConditionId id = model == Model::simple ? ConditionId::h5 : ConditionId::h7rd;
  std::vector<ConditionResult> out;
  try {
    const double bound = sufficient_d12_bound(model, p, DiffusionPartial{d11, d21, d22});
    out.push_back(less_than(id, d12, bound));
  } catch (const PreconditionError&) {
    out.push_back({id, false, -1.0});
  }
  out.push_back(greater_than(ConditionId::det_d, d11 * d22, d12 * d21));
  return out;
}

namespace {

// Positive once min_{lambda >= 0} det(A - lambda D) < 0 (continuous Turing
// condition), zero at the marginal d12.
double turing_gap(const Matrix2& A, const DiffusionPartial& D, double d12) {
  const double s = linear_coefficient(A, D.d11, d12, D.d21, D.d22);
  const double det_d = std::max(0.0, D.d11 * D.d22 - d12 * D.d21);
  return s - 2.0 * std::sqrt(A.det() * det_d);
}

// Bracketed root of turing_gap on [lo, hi] with gap(lo) < 0 <= gap(hi).
// Illinois-modified regula falsi, falling back to bisection when the secant
// step stalls.
double refine_root(const Matrix2& A, const DiffusionPartial& D, double lo, double hi) {
  double f_lo = turing_gap(A, D, lo);
  double f_hi = turing_gap(A, D, hi);
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 1e-10 * std::max(1.0, std::abs(hi))) break;
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi) || iter % 8 == 7) x = 0.5 * (lo + hi);
    const double f = turing_gap(A, D, x);
    if (f >= 0.0) {
      hi = x;
      f_hi = f;
      if (side == +1) f_lo *= 0.5;
      side = +1;
    } else {
      lo = x;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }
  return hi;
}

}  // namespace

std::optional<double> exact_turing_threshold(const Matrix2& A, const DiffusionPartial& D) {
  if (!(A.trace() < 0.0 && A.det() > 0.0)) {
    throw PreconditionError("exact Turing threshold needs a stable kinetic matrix");
  }
  if (turing_gap(A, D, 0.0) >= 0.0) return 0.0;

  if (D.d21 == 0.0) {
    // det D does not depend on d12 and the gap is linear with slope a21.
    if (!(A.a21 > 0.0)) return std::nullopt;
    return (2.0 * std::sqrt(A.det() * D.d11 * D.d22) -
            linear_coefficient(A, D.d11, 0.0, D.d21, D.d22)) /
           A.a21;
  }

  const double ceiling = D.d11 * D.d22 / D.d21;
  const double hi = ceiling - 1e-9 * ceiling;
  if (!(hi > 0.0)) return std::nullopt;
  constexpr int kSamples = 4096;
  double prev = 0.0;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = hi * static_cast<double>(i) / kSamples;
    if (turing_gap(A, D, x) >= 0.0) return refine_root(A, D, prev, x);
    prev = x;
  }
  return std::nullopt;
}

double critical_lambda(const Matrix2& A, const DiffusionMatrix2& D) {
  return mode_det_polynomial(A, D).argmin_nonnegative();
}

int default_k_max(const Matrix2& A, const DiffusionMatrix2& D, double L) {
  const double ratio = std::abs(A.det()) / D.det();
  const double lambda_star = std::max(std::sqrt(ratio), critical_lambda(A, D));
  const double lambda_hi = 10.0 * lambda_star;
  const double k = std::ceil(L * std::sqrt(lambda_hi) / std::numbers::pi);
  return std::max(1, static_cast<int>(std::min(k, 1e7)));
}

TuringReport classify(const Matrix2& A, const DiffusionMatrix2& D, const SpatialDomain& domain,
                      double eps) {
  TuringReport report;
  report.kinetically_stable = A.trace() < 0.0 && A.det() > 0.0;
  const DiffusionPartial partial{D.d11(), D.d21(), D.d22()};
  if (A.a21 > 0.0) {
    report.d12_sufficient_bound = sufficient_d12_bound(A, partial);
    report.stable_sufficient =
        report.kinetically_stable && D.d12() < *report.d12_sufficient_bound;
  }
  if (report.kinetically_stable) {
    report.d12_exact_threshold = exact_turing_threshold(A, partial);
  }

  report.curve = dispersion_scan(A, D, domain);
  double min_det = std::numeric_limits<double>::infinity();
  report.max_re = -std::numeric_limits<double>::infinity();
  for (const auto& pt : report.curve.points) {
    if (pt.det < min_det) {
      min_det = pt.det;
      if (pt.det < 0.0) report.critical_mode = pt.k;
    }
    if (pt.max_re > report.max_re) {
      report.max_re = pt.max_re;
      report.least_stable_mode = pt.k;
    }
  }
  if (report.max_re < -eps) {
    report.verdict = Verdict::stable;
  } else if (report.max_re > eps) {
    report.verdict = Verdict::unstable;
  } else {
    report.verdict = Verdict::marginal;
  }
  return report;
}

}  // namespace tmkt
