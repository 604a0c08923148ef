#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tmkt/error.hpp"
#include "tmkt/kinetics.hpp"

using namespace tmkt;

namespace {

const KineticParams kRatio{1, 10, 2, 1, 2};
const KineticParams kSimple{1, 10, 1, 1};

double norm(State2 s) { return std::max(std::abs(s.u), std::abs(s.v)); }

}  // namespace

TEST_CASE("KineticParams rejects nonpositive or non-finite values") {
  CHECK_THROWS_AS(KineticParams(0, 10, 1, 1), PreconditionError);
  CHECK_THROWS_AS(KineticParams(1, -1, 1, 1), PreconditionError);
  CHECK_THROWS_AS(KineticParams(1, 10, 1, 1, 0), PreconditionError);
  CHECK_THROWS_AS(KineticParams(1, 10, NAN, 1), PreconditionError);
}

TEST_CASE("simple right-hand side at known equilibria") {
  CHECK(norm(simple_rhs(kSimple, {0, 0})) == 0.0);
  CHECK(norm(simple_rhs(kSimple, {1, 0.9})) < 1e-15);
  CHECK(norm(simple_rhs(kSimple, {10, 0})) == 0.0);
  const State2 f = simple_rhs(kSimple, {2, 1});
  CHECK(f.u == doctest::Approx(2 * (1 - 0.2) - 2));
  CHECK(f.v == doctest::Approx(2 - 1));
}

TEST_CASE("ratio right-hand side") {
  CHECK(norm(ratio_rhs(kRatio, {5, 2.5})) < 1e-15);
  CHECK(norm(ratio_rhs(kRatio, {0, 0})) == 0.0);
  CHECK(norm(ratio_rhs(kRatio, {10, 0})) == 0.0);
  const State2 f = ratio_rhs(kRatio, {4, 1});
  CHECK(f.u == doctest::Approx(4 * 0.6 - 2 * 4.0 / 6.0));
  CHECK(f.v == doctest::Approx(2 * 4.0 / 6.0 - 1));
  CHECK_THROWS_AS(ratio_rhs(kRatio, {-2, 1}), DomainError);
}

TEST_CASE("simple equilibria") {
  const auto eqs = simple_equilibria(kSimple);
  REQUIRE(eqs.size() == 3);
  CHECK(eqs[2].state.u == doctest::Approx(1));
  CHECK(eqs[2].state.v == doctest::Approx(0.9));
  CHECK(eqs[2].positive);

  const auto boundary = simple_equilibria(KineticParams(1, 1, 1, 1));
  CHECK(boundary[2].state.u == doctest::Approx(1));
  CHECK(boundary[2].state.v == doctest::Approx(0).epsilon(1e-15));
  CHECK_FALSE(boundary[2].positive);

  const State2 e = interior_equilibrium(Model::simple, KineticParams(2, 5, 0.5, 1));
  CHECK(e.u == doctest::Approx(2));
  CHECK(e.v == doctest::Approx(2.4));
}

TEST_CASE("ratio equilibria") {
  const auto eqs = ratio_equilibria(kRatio);
  REQUIRE(eqs.size() == 3);
  CHECK(eqs[0].note.find("continuous extension") != std::string::npos);
  CHECK(eqs[2].state.u == doctest::Approx(5));
  CHECK(eqs[2].state.v == doctest::Approx(2.5));
  CHECK(eqs[2].positive);

  const State2 corner = interior_equilibrium(Model::ratio, KineticParams(0.5, 10, 2, 1, 2));
  CHECK(corner.u == doctest::Approx(0).epsilon(1e-15));
  CHECK(corner.v == doctest::Approx(0).epsilon(1e-15));
  CHECK_FALSE(interior_is_positive(Model::ratio, KineticParams(0.5, 10, 2, 1, 2)));
  CHECK_FALSE(interior_is_positive(Model::ratio, KineticParams(1, 10, 1, 2, 2)));
}

TEST_CASE("equilibria are roots and match Newton iteration") {
  oracle::Sampler s(21);
  for (int i = 0; i < 200; ++i) {
    const bool ratio = i % 2 == 0;
    const KineticParams p = ratio ? s.ratio_params() : s.simple_params();
    const Model model = ratio ? Model::ratio : Model::simple;
    const State2 e = interior_equilibrium(model, p);
    const auto f = [&](State2 x) { return rhs(model, p, x); };
    CHECK(norm(f(e)) < 1e-12 * std::max(1.0, p.K() * p.r()));
    const auto root = oracle::newton_root(f, {e.u * 1.05, e.v * 0.95});
    REQUIRE(root);
    CHECK(std::abs(root->u - e.u) < 1e-9 * std::max(1.0, e.u));
    CHECK(std::abs(root->v - e.v) < 1e-9 * std::max(1.0, e.v));
  }
}

TEST_CASE("interior Jacobians at the worked examples") {
  const Matrix2 A = jacobian_at(Model::simple, kSimple, {1, 0.9});
  CHECK(A.a11 == doctest::Approx(-0.1));
  CHECK(A.a12 == doctest::Approx(-1));
  CHECK(A.a21 == doctest::Approx(0.9));
  CHECK(A.a22 == doctest::Approx(0).epsilon(1e-15));

  const Matrix2 Ar = interior_jacobian(Model::ratio, kRatio);
  CHECK(Ar == Matrix2{-0.25, -0.5, 0.25, -0.5});
  CHECK(max_abs_diff(jacobian_at(Model::ratio, kRatio, {5, 2.5}), Ar) < 1e-15);

  const Matrix2 origin = jacobian_at(Model::simple, KineticParams(3, 10, 1, 2), {0, 0});
  CHECK(origin == Matrix2{3, 0, 0, -2});
}

TEST_CASE("analytic Jacobian matches central differences") {
  oracle::Sampler s(22);
  for (int i = 0; i < 100; ++i) {
    const bool ratio = i % 2 == 0;
    const KineticParams p = ratio ? s.ratio_params() : s.simple_params();
    const Model model = ratio ? Model::ratio : Model::simple;
    const State2 x{s.uniform(0.1, 10), s.uniform(0.1, 10)};
    const Matrix2 fd = oracle::fd_jacobian([&](State2 y) { return rhs(model, p, y); }, x);
    CHECK(max_abs_diff(jacobian_at(model, p, x), fd) < 1e-5);
  }
}

TEST_CASE("closed-form interior Jacobian equals the analytic one at the equilibrium") {
  oracle::Sampler s(23);
  for (int i = 0; i < 200; ++i) {
    const KineticParams p = s.ratio_params();
    const State2 e = interior_equilibrium(Model::ratio, p);
    const Matrix2 A = interior_jacobian(Model::ratio, p);
    CHECK(max_abs_diff(A, jacobian_at(Model::ratio, p, e)) < 1e-9 * (1 + p.r() + p.m()));
    const double closed = p.d() * (p.m() - p.d()) * (p.d() - p.m() + p.a() * p.r()) /
                          (p.a() * p.m());
    CHECK(A.det() == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("kinetic stability reports") {
  const StabilityReport ok = check_kinetic_stability(Model::ratio, kRatio);
  CHECK(ok.verdict == Verdict::stable);
  CHECK(ok.all_hold());
  CHECK(ok.holds(ConditionId::h3rd));
  CHECK(ok.holds(ConditionId::plusmas));
  REQUIRE(ok.eigenvalues.size() == 2);
  CHECK((ok.eigenvalues[0] + ok.eigenvalues[1]).real() == doctest::Approx(-0.75));
  CHECK(std::abs(ok.eigenvalues[0] * ok.eigenvalues[1] - Complex(0.25)) < 1e-14);

  const StabilityReport small_a = check_kinetic_stability(Model::ratio, KineticParams(1, 10, 2, 1, 0.5));
  CHECK_FALSE(small_a.holds(ConditionId::h4rd));
  const double max_re = oracle::max_real(oracle::eig2(interior_jacobian(Model::ratio, KineticParams(1, 10, 2, 1, 0.5))));
  CHECK((small_a.verdict == Verdict::stable) == (max_re < -1e-10));

  const StabilityReport none = check_kinetic_stability(Model::simple, KineticParams(1, 0.5, 1, 1));
  CHECK_FALSE(none.holds(ConditionId::h2));
  CHECK_FALSE(none.interior_equilibrium);
  bool noted = false;
  for (const auto& n : none.notes) noted = noted || n.find("no interior equilibrium") != std::string::npos;
  CHECK(noted);

  const StabilityReport degenerate = check_kinetic_stability(Model::ratio, KineticParams(1, 10, 1, 1, 2));
  CHECK_FALSE(degenerate.holds(ConditionId::h3rd));
}

TEST_CASE("positivity of E_r is equivalent to h:3rd and h:2rd") {
  oracle::Sampler s(24);
  for (int i = 0; i < 500; ++i) {
    const KineticParams p(s.log_uniform(0.05, 5), s.log_uniform(0.5, 50), s.log_uniform(0.1, 5),
                          s.log_uniform(0.1, 5), s.log_uniform(0.1, 5));
    const auto report = check_kinetic_stability(Model::ratio, p);
    const bool conds = report.holds(ConditionId::h3rd) && report.holds(ConditionId::h2rd);
    const State2 e = interior_equilibrium(Model::ratio, p);
    CHECK(conds == (e.u > 0 && e.v > 0));
  }
}

TEST_CASE("condition margins are normalized signed slack") {
  const ConditionResult gt = greater_than(ConditionId::h2rd, 3.0, 2.0);
  CHECK(gt.holds);
  CHECK(gt.margin == doctest::Approx(0.5));
  const ConditionResult lt = less_than(ConditionId::h7rd, 5.0, 4.0);
  CHECK_FALSE(lt.holds);
  CHECK(lt.margin == doctest::Approx(-0.25));
  const ConditionResult zero = greater_than(ConditionId::h3rd, 0.5, 0.0);
  CHECK(zero.margin == doctest::Approx(0.5));
}

TEST_CASE("condition registry labels round-trip") {
  for (ConditionId id : all_conditions()) {
    const auto back = condition_from_label(label(id));
    REQUIRE(back);
    CHECK(*back == id);
  }
  CHECK(label(ConditionId::feltetel1) == "1.feltetel");
  CHECK(label(ConditionId::pathdkepletmas) == "pathdkepletmas");
  CHECK_FALSE(condition_from_label("h:99"));
}
