#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tmkt/error.hpp"
#include "tmkt/patch.hpp"

using namespace tmkt;

namespace {

const KineticParams kRatio{1, 10, 2, 1, 2};
const State2 kEq{5, 2.5};

PatchParams example(double delta1, double delta2) {
  return {delta1, delta2, MigrationFunction::rational(2), MigrationFunction::rational(2)};
}

// Central-difference Jacobian of the pure-migration right-hand side at the
// symmetric equilibrium.
Matrix4 fd_gamma(const KineticParams& p, const PatchParams& q, State2 eq) {
  Matrix4 J;
  const double base[4] = {eq.u, eq.v, eq.u, eq.v};
  for (int j = 0; j < 4; ++j) {
    double plus[4], minus[4];
    std::copy(base, base + 4, plus);
    std::copy(base, base + 4, minus);
    const double h = 1e-6 * std::max(1.0, std::abs(base[j]));
    plus[j] += h;
    minus[j] -= h;
    const State4 fp = patch_rhs(p, q, {plus[0], plus[1], plus[2], plus[3]}, Reaction::disabled);
    const State4 fm = patch_rhs(p, q, {minus[0], minus[1], minus[2], minus[3]}, Reaction::disabled);
    const double dp[4] = {fp.u1, fp.v1, fp.u2, fp.v2};
    const double dm[4] = {fm.u1, fm.v1, fm.u2, fm.v2};
    for (int i = 0; i < 4; ++i) J(i, j) = (dp[i] - dm[i]) / (2 * h);
  }
  return J;
}

std::vector<Complex> as_vector(const std::array<Complex, 4>& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST_CASE("rational migration function") {
  const MigrationFunction rho = MigrationFunction::rational(2);
  CHECK(rho.value(2.5) == doctest::Approx(4.5 / 3.5));
  CHECK(rho.derivative(2.5) == doctest::Approx(-1 / 12.25));
  CHECK(rho.value(5) == doctest::Approx(7.0 / 6.0));
  CHECK(rho.derivative(5) == doctest::Approx(-1.0 / 36.0));
  oracle::Sampler s(41);
  for (int i = 0; i < 500; ++i) {
    const MigrationFunction f = MigrationFunction::rational(s.uniform(1.001, 100));
    const double w = s.log_uniform(1e-3, 1e3);
    CHECK(f.value(w) > 1.0);
    CHECK(f.derivative(w) < 0.0);
    const double h = 1e-6 * std::max(1.0, w);
    CHECK(f.derivative(w) == doctest::Approx((f.value(w + h) - f.value(w - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(MigrationFunction::rational(1.0), PreconditionError);
}

TEST_CASE("constant and custom migration functions") {
  const MigrationFunction c = MigrationFunction::constant();
  CHECK(c.value(3) == 1.0);
  CHECK(c.derivative(3) == 0.0);
  const MigrationFunction e = MigrationFunction::custom([](double w) { return std::exp(-w) + 0.5; },
                                                       [](double w) { return -std::exp(-w); });
  CHECK(e.value(0) == doctest::Approx(1.5));
  CHECK(e.family() == MigrationFunction::Family::custom);
  CHECK_THROWS_AS(MigrationFunction::custom([](double w) { return 1 + w; }, [](double) { return 1.0; }),
                  PreconditionError);
}

TEST_CASE("patch right-hand side") {
  const State4 eq{5, 2.5, 5, 2.5};
  for (double d1 : {0.0, 0.1, 3.0}) {
    const State4 f = patch_rhs(kRatio, example(d1, 0.2), eq);
    CHECK(std::max({std::abs(f.u1), std::abs(f.v1), std::abs(f.u2), std::abs(f.v2)}) < 1e-12);
  }

  const State4 f = patch_rhs(kRatio, example(0.1, 0.1), {5, 2.5, 6, 2.5});
  const State2 local = ratio_rhs(kRatio, {5, 2.5});
  CHECK(f.u1 - local.u == doctest::Approx(0.1 * 9.0 / 7.0));

  oracle::Sampler s(42);
  for (int i = 0; i < 200; ++i) {
    const PatchParams q(s.uniform(0, 2), s.uniform(0, 2), MigrationFunction::rational(s.uniform(1.1, 5)),
                        MigrationFunction::rational(s.uniform(1.1, 5)));
    const State4 x{s.uniform(0, 10), s.uniform(0, 10), s.uniform(0, 10), s.uniform(0, 10)};
    const State4 g = patch_rhs(kRatio, q, x, Reaction::disabled);
    CHECK(std::abs(g.u1 + g.u2) < 1e-12 * (1 + std::abs(g.u1)));
    CHECK(std::abs(g.v1 + g.v2) < 1e-12 * (1 + std::abs(g.v1)));
  }
}

TEST_CASE("Gamma matrix") {
  CHECK(gamma_matrix(example(0, 0), kEq) == Matrix4{});

  const Matrix4 g = gamma_matrix(example(0.1, 0.2), kEq);
  CHECK(g(0, 0) == doctest::Approx(-0.1 * 4.5 / 3.5));
  CHECK(g(0, 1) == doctest::Approx(0.1 * 5 / 12.25));
  CHECK(g(0, 2) == doctest::Approx(0.1 * 4.5 / 3.5));
  const Matrix4 fd = fd_gamma(kRatio, example(0.1, 0.2), kEq);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(g(i, j) == doctest::Approx(fd(i, j)).epsilon(1e-6));
  for (int i = 0; i < 4; ++i) {
    CHECK(g(i, 0) + g(i, 2) == doctest::Approx(0).epsilon(1e-15));
    CHECK(g(i, 1) + g(i, 3) == doctest::Approx(0).epsilon(1e-15));
  }

  const PatchParams flat(0.3, 0.4, MigrationFunction::constant(), MigrationFunction::constant());
  const Matrix2 G = migration_block(flat, kEq);
  CHECK(G == Matrix2{0.3, 0, 0, 0.4});
}

TEST_CASE("block factorization") {
  const auto [A, B] = block_factor(patch_jacobian(kRatio), gamma_matrix(example(0, 0), kEq));
  CHECK(A == B);

  const PatchParams q = example(0.1, 0.2);
  const Matrix4 full = patch_jacobian(kRatio) + gamma_matrix(q, kEq);
  const auto [Ar, Bq] = block_factor(patch_jacobian(kRatio), gamma_matrix(q, kEq));
  CHECK(max_abs_diff(Bq, Ar - 2.0 * migration_block(q, kEq)) < 1e-15);
  auto ea = oracle::eig2(Ar), eb = oracle::eig2(Bq);
  ea.insert(ea.end(), eb.begin(), eb.end());
  CHECK(oracle::spectrum_distance(ea, oracle::eig4(full)) < 1e-8);

  Matrix4 broken = patch_jacobian(kRatio);
  broken(0, 2) = 1e-6;
  CHECK_THROWS_AS(block_factor(broken, gamma_matrix(q, kEq)), PreconditionError);
  Matrix4 bad_gamma = gamma_matrix(q, kEq);
  bad_gamma(0, 0) += 1e-6;
  CHECK_THROWS_AS(block_factor(patch_jacobian(kRatio), bad_gamma), PreconditionError);
}

TEST_CASE("spectral union over random migration parameters") {
  oracle::Sampler s(43);
  for (int i = 0; i < 100; ++i) {
    const KineticParams p = s.ratio_params();
    const State2 eq = interior_equilibrium(Model::ratio, p);
    const PatchParams q(s.uniform(0, 2), s.uniform(0, 2), MigrationFunction::rational(s.uniform(1.1, 10)),
                        MigrationFunction::rational(s.uniform(1.1, 10)));
    const Matrix4 full = patch_jacobian(p) + gamma_matrix(q, eq);
    const auto [A, B] = block_factor(patch_jacobian(p), gamma_matrix(q, eq));
    const auto ea = eigenvalues(A), eb = eigenvalues(B);
    std::vector<Complex> u{ea[0], ea[1], eb[0], eb[1]};
    const double scale = 1 + std::abs(A.trace()) + std::abs(B.trace());
    CHECK(oracle::spectrum_distance(u, as_vector(eigenvalues(full))) < 1e-10 * scale);
  }
}

TEST_CASE("capital migration bound") {
  CHECK(std::abs(delta1_bound(kRatio, example(0.1, 0.2)) - 0.6125) < 1e-12);
  const PatchParams flat(0.3, 0.4, MigrationFunction::constant(), MigrationFunction::rational(2));
  CHECK(std::isinf(delta1_bound(kRatio, flat)));

  const StabilityReport r = check_thm42(kRatio, flat);
  CHECK(r.holds(ConditionId::sign));
  CHECK(r.holds(ConditionId::p5));

  const StabilityReport zero = check_thm42(kRatio, example(0, 0.2));
  CHECK(zero.holds(ConditionId::p5));
  CHECK(zero.holds(ConditionId::sign));

  for (double d1 : {0.6125 - 1e-6, 0.6125 + 1e-6}) {
    const StabilityReport rep = check_thm42(kRatio, example(d1, 0.2));
    const auto [A, B] = block_factor(patch_jacobian(kRatio), gamma_matrix(example(d1, 0.2), kEq));
    CHECK(rep.holds(ConditionId::p5) == (d1 < 0.6125));
    CHECK(rep.holds(ConditionId::sign) == (B.a12 < 0));
    CHECK((B.a12 < 0) == (d1 < 0.6125));
  }
}

TEST_CASE("determinant route conditions") {
  const StabilityReport r = check_thm43(kRatio, example(0.1, 0.2));
  const auto* f1 = r.find(ConditionId::feltetel1);
  const auto* f2 = r.find(ConditionId::feltetel2ujalak);
  REQUIRE(f1);
  REQUIRE(f2);
  // (rho1' u / rho1)(rho2' v / rho2) = (-140/441)(-15/252)
  const double product = (-140.0 / 441.0) * (-15.0 / 252.0);
  CHECK(product == doctest::Approx(0.018896447467876));
  CHECK(f1->holds);
  CHECK(f1->margin == doctest::Approx((1 - product) / product));
  // -1/v = -0.4 < rho1'/rho1 = -4/63
  CHECK(f2->holds);
  CHECK(r.verdict == Verdict::stable);

  const PatchParams flat(0.3, 0.4, MigrationFunction::constant(), MigrationFunction::constant());
  const StabilityReport c = check_thm43(kRatio, flat);
  CHECK(c.holds(ConditionId::feltetel1));
  CHECK(c.holds(ConditionId::feltetel2ujalak));
  CHECK(c.holds(ConditionId::rho));
}

TEST_CASE("the rewritten second condition holds across the rational family") {
  // rho'/rho = (1 - alpha)/((1 + v)(alpha + v)) > -1/v for every alpha > 1,
  // so an alpha sweep never finds a failure.
  for (double v : {0.1, 1.0, 2.5, 10.0}) {
    for (double alpha = 1.01; alpha < 1e6; alpha *= 1.5) {
      const PatchParams q(0.1, 0.1, MigrationFunction::rational(alpha), MigrationFunction::rational(2));
      CHECK(feltetel2ujalak_condition(q, {5, v}).holds);
    }
  }
}

TEST_CASE("theorem condition sets imply a stable 4x4 spectrum") {
  oracle::Sampler s(44);
  int n42 = 0, n43 = 0;
  for (int i = 0; i < 4000 && (n42 < 200 || n43 < 200); ++i) {
    const KineticParams p = s.ratio_params();
    const PatchParams q(s.uniform(0, 2), s.uniform(0, 2), MigrationFunction::rational(s.uniform(1.1, 10)),
                        MigrationFunction::rational(s.uniform(1.1, 10)));
    const State2 eq = interior_equilibrium(Model::ratio, p);
    const Matrix4 full = patch_jacobian(p) + gamma_matrix(q, eq);
    const double max_re = oracle::max_real(oracle::eig4(full));
    if (check_thm42(p, q).all_hold()) {
      ++n42;
      CHECK(max_re < 0);
    }
    if (check_thm43(p, q).all_hold()) {
      ++n43;
      CHECK(max_re < 0);
    }
  }
  CHECK(n42 >= 200);
  CHECK(n43 >= 200);
}
