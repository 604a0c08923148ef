#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "tmkt/error.hpp"
#include "tmkt/pde_io.hpp"
#include "tmkt/pde_sim.hpp"

using namespace tmkt;

namespace {

const KineticParams kRatio{1, 10, 2, 1, 2};

SimSystem ratio_system(double d11, double d12, double d21, double d22) {
  return {SimModel::ratio, kRatio, DiffusionMatrix2(d11, d12, d21, d22), std::nullopt, std::nullopt,
          Reaction::enabled};
}

double total(std::span<const double> f, double h) {
  double s = 0.0;
  for (double x : f) s += x * h;
  return s;
}

// Cosine amplitude of mode k in species s.
double cosine_amplitude(const Field& f, std::size_t s, int k, double mean) {
  const auto c = f.component(s);
  const double n = static_cast<double>(c.size());
  double a = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    a += (c[i] - mean) * std::cos(std::numbers::pi * k * (static_cast<double>(i) + 0.5) / n);
  }
  return a * 2.0 / n;
}

}  // namespace

TEST_CASE("grid and field layout") {
  const Grid1D g(2.0, 16);
  CHECK(g.h() == 0.125);
  CHECK(g.x(0) == 0.0625);
  CHECK(g.x(15) == doctest::Approx(1.9375));
  CHECK_THROWS_AS(Grid1D(1.0, 8), PreconditionError);
  Field f(2, 16, 1.0);
  f.component(1)[3] = 5.0;
  CHECK(f.data()[16 + 3] == 5.0);
}

TEST_CASE("Neumann Laplacian") {
  const std::size_t n = 256;
  const Grid1D g(1.0, n);
  std::vector<double> ones(n, 3.0);
  for (double x : laplacian_neumann(ones, g.h())) CHECK(x == 0.0);

  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = std::cos(std::numbers::pi * g.x(i));
  const auto lc = laplacian_neumann(c, g.h());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += lc[i] * c[i];
    den += c[i] * c[i];
  }
  CHECK(std::abs(num / den + std::numbers::pi * std::numbers::pi) < 1e-3);

  std::vector<double> lin(n);
  for (std::size_t i = 0; i < n; ++i) lin[i] = g.x(i);
  const auto ll = laplacian_neumann(lin, g.h());
  CHECK(std::abs(ll[n / 2]) < 1e-8);
  CHECK(ll[0] == doctest::Approx(1.0 / g.h()));
  CHECK(ll[n - 1] == doctest::Approx(-1.0 / g.h()));
  CHECK(std::abs(total(ll, g.h())) < 1e-9);
}

TEST_CASE("step leaves the equilibrium fixed and conserves mass without reaction") {
  const Grid1D g(10, 64);
  SimSystem sys = ratio_system(1, 1, 0.5, 1);
  Field f(2, 64);
  const auto eq = system_equilibrium(sys);
  std::fill(f.component(0).begin(), f.component(0).end(), eq[0]);
  std::fill(f.component(1).begin(), f.component(1).end(), eq[1]);
  const double dt = stable_dt_bound(sys, g, 0.4);
  Field before = f;
  for (int i = 0; i < 10; ++i) REQUIRE(step(sys, g, f, dt) == StepStatus::ok);
  for (std::size_t i = 0; i < f.data().size(); ++i) CHECK(std::abs(f.data()[i] - before.data()[i]) < 1e-13 * 10);

  SimSystem pure = ratio_system(1, 0, 0, 2);
  pure.reaction = Reaction::disabled;
  Field p = perturbed_equilibrium(pure, g, 0.3, 7);
  for (int i = 0; i < 100; ++i) {
    const double u0 = total(p.component(0), g.h()), v0 = total(p.component(1), g.h());
    REQUIRE(step(pure, g, p, stable_dt_bound(pure, g, 0.4)) == StepStatus::ok);
    CHECK(std::abs(total(p.component(0), g.h()) - u0) < 1e-12 * std::abs(u0));
    CHECK(std::abs(total(p.component(1), g.h()) - v0) < 1e-12 * std::abs(v0));
  }
}

TEST_CASE("stable time step bound") {
  const Grid1D g(100, 512);
  const SimSystem sys = ratio_system(1, 1, 0.5, 1);
  CHECK(stable_dt_bound(sys, g, 0.4) == doctest::Approx(0.4 * g.h() * g.h() / 4));
  SimConfig c;
  c.t_end = 1;
  c.dt = 1.0;
  CHECK_THROWS_AS(simulate(sys, g, c), PreconditionError);
}

TEST_CASE("perturbed equilibrium is deterministic per seed") {
  const Grid1D g(10, 32);
  const SimSystem sys = ratio_system(1, 1, 0.5, 1);
  const Field a = perturbed_equilibrium(sys, g, 1e-2, 3);
  const Field b = perturbed_equilibrium(sys, g, 1e-2, 3);
  const Field c = perturbed_equilibrium(sys, g, 1e-2, 4);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  CHECK_FALSE(std::equal(a.data().begin(), a.data().end(), c.data().begin()));
  for (double u : a.component(0)) CHECK(std::abs(u / 5 - 1) <= 1e-2);
  for (double v : a.component(1)) CHECK(std::abs(v / 2.5 - 1) <= 1e-2);
}

TEST_CASE("dominant cosine mode") {
  std::vector<double> f(128);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = (i + 0.5) / 128.0;
    f[i] = 2 + std::cos(5 * std::numbers::pi * x) + 0.3 * std::cos(9 * std::numbers::pi * x);
  }
  CHECK(dominant_cosine_mode(f) == 5);
  std::vector<double> flat(128, 1.0);
  CHECK_FALSE(dominant_cosine_mode(flat));
}

TEST_CASE("zero perturbation stays at the equilibrium") {
  const Grid1D g(100, 64);
  SimConfig c;
  c.t_end = 20;
  c.epsilon_ic = 0;
  const SimResult r = simulate(ratio_system(1, 7.5, 0, 1), g, c);
  CHECK(r.final_deviation < 1e-13);
  CHECK(r.verdict == SimVerdict::converged);
}

TEST_CASE("linear growth rate matches the dispersion relation") {
  const double L = 100;
  const std::size_t n = 512;
  const Grid1D g(L, n);
  const SimSystem sys = ratio_system(1, 7.5, 0, 1);
  const int k = 23;
  Field f(2, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(k * std::numbers::pi * g.x(i) / L);
    f.component(0)[i] = 5 * (1 + 1e-8 * c);
    f.component(1)[i] = 2.5 * (1 + 1e-8 * c);
  }
  const double dt = stable_dt_bound(sys, g, 0.4);
  const auto advance = [&](double t) {
    const auto steps = static_cast<int>(std::lround(t / dt));
    for (int s = 0; s < steps; ++s) REQUIRE(step(sys, g, f, t / steps) == StepStatus::ok);
  };
  advance(10);
  const double a1 = std::abs(cosine_amplitude(f, 0, k, 5));
  advance(30);
  const double a2 = std::abs(cosine_amplitude(f, 0, k, 5));
  const double rate = std::log(a2 / a1) / 30;
  const double lambda = std::pow(k * std::numbers::pi / L, 2);
  const double expected = oracle::max_real(oracle::eig2(oracle::mode_matrix(interior_jacobian(Model::ratio, kRatio), 1, 7.5, 0, 1, lambda)));
  CHECK(expected > 0);
  CHECK(std::abs(rate - expected) < 0.05 * expected);
}

TEST_CASE("stable configuration converges with a decaying deviation") {
  const Grid1D g(100, 128);
  SimConfig c;
  c.t_end = 60;
  c.record_every = 1;
  const SimResult r = simulate(ratio_system(1, 1, 0.5, 1), g, c);
  REQUIRE(r.deviation.size() == 61);
  const std::size_t half = r.deviation.size() / 2;
  for (std::size_t i = half + 1; i < r.deviation.size(); ++i) {
    CHECK(r.deviation[i].deviation < r.deviation[i - 1].deviation);
  }
  CHECK(r.final_deviation < 1e-6);
  CHECK(r.verdict == SimVerdict::converged);
}

TEST_CASE("pattern above the Turing threshold") {
  const double L = 50;
  const Grid1D g(L, 256);
  const SimSystem sys = ratio_system(1, 7.5, 0, 1);
  SimConfig c;
  c.t_end = 300;
  c.epsilon_ic = 1e-6;
  const SimResult r = simulate(sys, g, c);
  CHECK(r.verdict == SimVerdict::pattern);
  const Matrix2 A = interior_jacobian(Model::ratio, kRatio);
  const TuringReport t = classify(A, sys.diffusion, SpatialDomain(L, 60));
  REQUIRE(t.critical_mode);
  REQUIRE(r.dominant_mode);
  CHECK(std::abs(*r.dominant_mode - *t.critical_mode) <= 1);
}

TEST_CASE("divergence guard") {
  const Grid1D g(100, 128);
  SimConfig c;
  c.t_end = 200;
  const SimResult r = simulate(ratio_system(1, 10, 0, 1), g, c);
  CHECK(r.verdict == SimVerdict::diverged);
  CHECK(r.t_reached < 200);
}

TEST_CASE("second-order spatial convergence") {
  const double L = 10;
  const SimSystem sys = ratio_system(1, 1, 0.5, 1);
  SimConfig c;
  c.t_end = 2;
  const auto energy = [&](std::size_t n) {
    const Grid1D g(L, n);
    Field init(2, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.x(i);
      init.component(0)[i] = 5 * (1 + 0.1 * std::cos(std::numbers::pi * x / L) + 0.05 * std::cos(3 * std::numbers::pi * x / L));
      init.component(1)[i] = 2.5 * (1 - 0.05 * std::cos(2 * std::numbers::pi * x / L));
    }
    const SimResult r = simulate(sys, g, c, init);
    double e = 0.0;
    for (double u : r.final_fields.component(0)) e += (u - 5) * (u - 5) * g.h();
    return e;
  };
  const double e1 = energy(64), e2 = energy(128), e3 = energy(256);
  const double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
  CHECK(order >= 1.8);
}

TEST_CASE("two-country simulation keeps symmetric data symmetric") {
  const Grid1D g(50, 64);
  SimSystem sys{SimModel::patch, kRatio, DiffusionMatrix2(1, 1, 0.5, 1),
                PatchParams(0.1, 0.2, MigrationFunction::rational(2), MigrationFunction::rational(2)),
                std::nullopt, Reaction::enabled};
  Field init(4, 64);
  for (std::size_t i = 0; i < 64; ++i) {
    const double w = std::cos(3 * std::numbers::pi * g.x(i) / 50);
    init.component(0)[i] = init.component(2)[i] = 5 * (1 + 0.01 * w);
    init.component(1)[i] = init.component(3)[i] = 2.5 * (1 - 0.01 * w);
  }
  SimConfig c;
  c.t_end = 20;
  const SimResult r = simulate(sys, g, c, init);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(std::abs(r.final_fields.component(0)[i] - r.final_fields.component(2)[i]) < 1e-10);
    CHECK(std::abs(r.final_fields.component(1)[i] - r.final_fields.component(3)[i]) < 1e-10);
  }

  sys.diffusion_country2 = DiffusionMatrix2(1, 1, 0.5, 2);
  CHECK_THROWS_AS(simulate(sys, g, c, init), EqualDiffusionError);
}

TEST_CASE("pure migration conserves totals in the patch system") {
  const Grid1D g(10, 16);
  SimSystem sys{SimModel::patch, kRatio, DiffusionMatrix2(1, 0, 0, 1),
                PatchParams(0.5, 0.7, MigrationFunction::rational(2), MigrationFunction::rational(3)),
                std::nullopt, Reaction::disabled};
  Field f = perturbed_equilibrium(sys, g, 0.2, 9);
  const auto sums = [&] {
    return std::pair{total(f.component(0), g.h()) + total(f.component(2), g.h()),
                     total(f.component(1), g.h()) + total(f.component(3), g.h())};
  };
  const auto [u0, v0] = sums();
  const double dt = stable_dt_bound(sys, g, 0.4);
  for (int i = 0; i < 200; ++i) REQUIRE(step(sys, g, f, dt) == StepStatus::ok);
  const auto [u1, v1] = sums();
  CHECK(std::abs(u1 - u0) < 1e-12 * u0);
  CHECK(std::abs(v1 - v0) < 1e-12 * v0);
}

TEST_CASE("snapshot and deviation CSV") {
  const Grid1D g(1, 16);
  Field f(2, 16, 1.5);
  std::ostringstream os;
  write_snapshot_csv(os, g, f);
  CHECK(os.str().rfind("x,u,v\n0.03125,1.5,1.5\n", 0) == 0);
  Field four(4, 16, 2.0);
  std::ostringstream os4;
  write_snapshot_csv(os4, g, four);
  CHECK(os4.str().rfind("x,u,v,u2,v2\n", 0) == 0);
  std::ostringstream dv;
  const std::vector<DeviationSample> s{{0, 0.5}, {1, 0.25}};
  write_deviation_csv(dv, s);
  CHECK(dv.str() == "t,deviation\n0,0.5\n1,0.25\n");
  std::ostringstream svg;
  write_profile_svg(svg, g, f);
  CHECK(svg.str().find("<svg") != std::string::npos);
  CHECK(svg.str().find("polyline") != std::string::npos);
}
