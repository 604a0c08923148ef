#include "tmkt/patch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tmkt/error.hpp"

namespace tmkt {

PatchParams::PatchParams(double delta1, double delta2, MigrationFunction rho1,
                         MigrationFunction rho2)
    : delta1_(delta1), delta2_(delta2), rho1_(std::move(rho1)), rho2_(std::move(rho2)) {
  if (!(delta1 >= 0.0) || !(delta2 >= 0.0) || !std::isfinite(delta1) ||
      !std::isfinite(delta2)) {
    throw PreconditionError("migration velocities delta1, delta2 must be >= 0");
  }
}

State4 patch_rhs(const KineticParams& p, const PatchParams& q, const State4& s,
                 Reaction reaction) {
  const double cap12 = q.rho1().value(s.v1) * s.u1;
  const double cap21 = q.rho1().value(s.v2) * s.u2;
  const double lab12 = q.rho2().value(s.u1) * s.v1;
  const double lab21 = q.rho2().value(s.u2) * s.v2;
  State4 out{q.delta1() * (cap21 - cap12), q.delta2() * (lab21 - lab12),
             q.delta1() * (cap12 - cap21), q.delta2() * (lab12 - lab21)};
  if (reaction == Reaction::enabled) {
    const State2 k1 = ratio_rhs(p, {s.u1, s.v1});
    const State2 k2 = ratio_rhs(p, {s.u2, s.v2});
    out.u1 += k1.u;
    out.v1 += k1.v;
    out.u2 += k2.u;
    out.v2 += k2.v;
  }
  return out;
}

Matrix2 migration_block(const PatchParams& q, State2 eq) {
  return {q.delta1() * q.rho1().value(eq.v), q.delta1() * q.rho1().derivative(eq.v) * eq.u,
          q.delta2() * q.rho2().derivative(eq.u) * eq.v, q.delta2() * q.rho2().value(eq.u)};
}

Matrix4 gamma_matrix(const PatchParams& q, State2 eq) {
  const Matrix2 G = migration_block(q, eq);
  const Matrix2 minus_g = -1.0 * G;
  return Matrix4::from_blocks(minus_g, G, G, minus_g);
}

Matrix4 patch_jacobian(const KineticParams& p) {
  const Matrix2 A = interior_jacobian(Model::ratio, p);
  return Matrix4::block_diagonal(A, A);
}

std::pair<Matrix2, Matrix2> block_factor(const Matrix4& A_p, const Matrix4& gamma) {
  constexpr double kTol = 1e-12;
  const Matrix2 A = A_p.block(0, 0);
  if (max_abs_diff(A, A_p.block(1, 1)) > kTol || max_abs_diff(A_p.block(0, 1), {}) > kTol ||
      max_abs_diff(A_p.block(1, 0), {}) > kTol) {
    throw PreconditionError("A_p must be block-diagonal with two equal 2x2 blocks");
  }
  const Matrix2 G = gamma.block(0, 1);
  const Matrix2 minus_g = -1.0 * G;
  if (max_abs_diff(gamma.block(1, 0), G) > kTol || max_abs_diff(gamma.block(0, 0), minus_g) > kTol ||
      max_abs_diff(gamma.block(1, 1), minus_g) > kTol) {
    throw PreconditionError("Gamma must have the [[-G, G], [G, -G]] block pattern");
  }
  return {A, A - 2.0 * G};
}

double delta1_bound(const KineticParams& p, const PatchParams& q) {
  const State2 eq = interior_equilibrium(Model::ratio, p);
  const double slope = q.rho1().derivative(eq.v);
  if (slope == 0.0) return std::numeric_limits<double>::infinity();
  return -p.d() * p.d() / (2.0 * slope * eq.u * p.m());
}

ConditionResult migration_shape_condition(const PatchParams& q, State2 eq) {
  const double r1 = q.rho1().value(eq.v);
  const double r2 = q.rho2().value(eq.u);
  const double s1 = q.rho1().derivative(eq.v);
  const double s2 = q.rho2().derivative(eq.u);
  const bool holds = r1 > 0.0 && r2 > 0.0 && s1 <= 0.0 && s2 <= 0.0;
  return {ConditionId::rho, holds, std::min({r1, r2, -s1, -s2})};
}

ConditionResult feltetel1_condition(const PatchParams& q, State2 eq) {
  const double x1 = q.rho1().derivative(eq.v) * eq.u / q.rho1().value(eq.v);
  const double x2 = q.rho2().derivative(eq.u) * eq.v / q.rho2().value(eq.u);
  return greater_than(ConditionId::feltetel1, 1.0, x1 * x2);
}

ConditionResult feltetel2ujalak_condition(const PatchParams& q, State2 eq) {
  return less_than(ConditionId::feltetel2ujalak, -1.0 / eq.v,
                   q.rho1().derivative(eq.v) / q.rho1().value(eq.v));
}

namespace {

void fill_spectrum(StabilityReport& report, const Matrix2& A, const Matrix2& B, double eps) {
  const auto ea = eigenvalues(A);
  const auto eb = eigenvalues(B);
  report.eigenvalues = {ea[0], ea[1], eb[0], eb[1]};
  report.verdict = classify_spectrum(report.eigenvalues, eps);
}

ConditionResult find_or_throw(const std::vector<ConditionResult>& list, ConditionId id) {
  for (const auto& c : list) {
    if (c.id == id) return c;
  }
  throw std::logic_error("missing kinetic condition");
}

}  // namespace

StabilityReport check_thm42(const KineticParams& p, const PatchParams& q, double eps) {
  StabilityReport report;
  report.conditions = ratio_kinetic_conditions(p);
  report.interior_equilibrium = interior_is_positive(Model::ratio, p);
  const State2 eq = interior_equilibrium(Model::ratio, p);
  if (!report.interior_equilibrium) report.notes.emplace_back("no interior equilibrium");

  report.conditions.push_back(migration_shape_condition(q, eq));
  const Matrix2 A = interior_jacobian(Model::ratio, p);
  const Matrix2 G = migration_block(q, eq);
  const Matrix2 B = A - 2.0 * G;
  report.conditions.push_back(less_than(ConditionId::sign, B.a12, 0.0));
  report.conditions.push_back(less_than(ConditionId::p5, q.delta1(), delta1_bound(p, q)));

  if (report.interior_equilibrium && report.all_hold()) {
    const bool sign_stable = B.a11 < 0.0 && B.a22 < 0.0 && B.a12 < 0.0 && B.a21 > 0.0;
    report.notes.emplace_back(sign_stable ? "B is sign-stable"
                                          : "conditions hold but B is not sign-stable");
  }
  fill_spectrum(report, A, B, eps);
  return report;
}

StabilityReport check_thm43(const KineticParams& p, const PatchParams& q, double eps) {
  StabilityReport report;
  const auto kinetic = ratio_kinetic_conditions(p);
  report.conditions.push_back(find_or_throw(kinetic, ConditionId::h3rd));
  report.conditions.push_back(find_or_throw(kinetic, ConditionId::plusmas));
  report.interior_equilibrium = interior_is_positive(Model::ratio, p);
  const State2 eq = interior_equilibrium(Model::ratio, p);
  if (!report.interior_equilibrium) report.notes.emplace_back("no interior equilibrium");

  report.conditions.push_back(feltetel1_condition(q, eq));
  report.conditions.push_back(feltetel2ujalak_condition(q, eq));
  report.conditions.push_back(migration_shape_condition(q, eq));

  const Matrix2 A = interior_jacobian(Model::ratio, p);
  const Matrix2 B = A - 2.0 * migration_block(q, eq);
  if (report.interior_equilibrium && report.all_hold()) {
    const bool ok = B.det() > 0.0 && B.a11 < 0.0 && B.a22 < 0.0;
    report.notes.emplace_back(ok ? "det B > 0 with negative diagonal"
                                 : "conditions hold but det B <= 0 or diagonal not negative");
  }
  fill_spectrum(report, A, B, eps);
  return report;
}

}  // namespace tmkt
