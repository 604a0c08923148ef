#include "tmkt/kinetics.hpp"

#include <cmath>
#include <sstream>

#include "tmkt/error.hpp"

namespace tmkt {

std::string_view to_string(Model m) {
  return m == Model::simple ? "simple" : "ratio";
}

KineticParams::KineticParams(double r, double K, double m, double d, double a)
    : r_(r), K_(K), m_(m), d_(d), a_(a) {
  const auto check = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream os;
      os << "kinetic parameter " << name << " must be finite and > 0, got " << value;
      throw PreconditionError(os.str());
    }
  };
  check(r, "r");
  check(K, "K");
  check(m, "m");
  check(d, "d");
  check(a, "a");
}

State2 simple_rhs(const KineticParams& p, State2 s) {
  const double uv = s.u * s.v;
  return {s.u * p.r() * (1.0 - s.u / p.K()) - p.m() * uv,
          p.m() * uv - p.d() * s.v};
}

State2 ratio_rhs(const KineticParams& p, State2 s) {
  double response = 0.0;
  if (s.u != 0.0 || s.v != 0.0) {
    const double denom = p.a() * s.v + s.u;
    if (denom == 0.0) {
      throw DomainError("ratio-dependent response undefined: a*v + u == 0");
    }
    response = s.u * s.v / denom;
  }
  return {s.u * p.r() * (1.0 - s.u / p.K()) - p.m() * response,
          p.m() * response - p.d() * s.v};
}

State2 rhs(Model model, const KineticParams& p, State2 s) {
  return model == Model::simple ? simple_rhs(p, s) : ratio_rhs(p, s);
}

std::vector<Equilibrium> simple_equilibria(const KineticParams& p) {
  const State2 bar = interior_equilibrium(Model::simple, p);
  Equilibrium interior{"E_bar", bar, bar.u > 0.0 && bar.v > 0.0, ""};
  if (!interior.positive) {
    interior.note = bar.v == 0.0 ? "K = d/m: coincides with the boundary"
                                 : "K < d/m: labour component negative";
  }
  return {
      {"E0", {0.0, 0.0}, false, "trivial"},
      {"E1", {p.K(), 0.0}, false, "labour-free"},
      interior,
  };
}

std::vector<Equilibrium> ratio_equilibria(const KineticParams& p) {
  const State2 bar = interior_equilibrium(Model::ratio, p);
  Equilibrium interior{"E_r", bar, interior_is_positive(Model::ratio, p), ""};
  if (!interior.positive) {
    if (p.m() <= p.d()) {
      interior.note = "m <= d: labour cannot sustain itself";
    } else if (bar.u == 0.0 && bar.v == 0.0) {
      interior.note = "r = (m-d)/a: coincides with the origin";
    } else {
      interior.note = "r < (m-d)/a: interior state not positive";
    }
  }
  return {
      {"E0", {0.0, 0.0}, false, "exists only by continuous extension"},
      {"E1", {p.K(), 0.0}, false, "labour-free"},
      interior,
  };
}

State2 interior_equilibrium(Model model, const KineticParams& p) {
  const double r = p.r(), K = p.K(), m = p.m(), d = p.d(), a = p.a();
  if (model == Model::simple) {
    return {d / m, (-d * r + K * m * r) / (K * m * m)};
  }
  const double q = d - m + a * r;
  return {K * q / (a * r), K * (m - d) * q / (a * a * d * r)};
}

bool interior_is_positive(Model model, const KineticParams& p) {
  if (model == Model::simple) return p.K() > p.d() / p.m();
  return p.m() - p.d() > 0.0 && p.r() > (p.m() - p.d()) / p.a();
}

Matrix2 jacobian_at(Model model, const KineticParams& p, State2 s) {
  const double r = p.r(), K = p.K(), m = p.m(), d = p.d();
  const double growth_u = r - 2.0 * r * s.u / K;
  if (model == Model::simple) {
    return {growth_u - m * s.v, -m * s.u, m * s.v, m * s.u - d};
  }
  const double denom = p.a() * s.v + s.u;
  if (denom == 0.0) {
    throw DomainError("ratio-dependent response not differentiable where a*v + u == 0");
  }
  const double inv2 = 1.0 / (denom * denom);
  const double h_u = p.a() * s.v * s.v * inv2;
  const double h_v = s.u * s.u * inv2;
  return {growth_u - m * h_u, -m * h_v, m * h_u, m * h_v - d};
}

Matrix2 interior_jacobian(Model model, const KineticParams& p) {
  const double r = p.r(), K = p.K(), m = p.m(), d = p.d(), a = p.a();
  if (model == Model::simple) {
    return {-d * r / (K * m), -d, r * (1.0 - d / (K * m)), 0.0};
  }
  return {(m * m - d * d) / (m * a) - r, -d * d / m,
          (d - m) * (d - m) / (a * m), -d * (m - d) / m};
}

std::vector<ConditionResult> ratio_kinetic_conditions(const KineticParams& p) {
  const double r = p.r(), m = p.m(), d = p.d(), a = p.a();
  return {
      greater_than(ConditionId::h3rd, m - d, 0.0),
      greater_than(ConditionId::h2rd, r, (m - d) / a),
      greater_than(ConditionId::h4rd, a, 1.0),
      greater_than(ConditionId::plusmas, r, (m - d) / a * (1.0 + d / m)),
  };
}

StabilityReport check_kinetic_stability(Model model, const KineticParams& p, double eps) {
  StabilityReport report;
  if (model == Model::simple) {
    report.conditions.push_back(greater_than(ConditionId::h2, p.K(), p.d() / p.m()));
  } else {
    report.conditions = ratio_kinetic_conditions(p);
    if (p.m() == p.d()) report.notes.emplace_back("degenerate: m == d");
  }
  report.interior_equilibrium = interior_is_positive(model, p);
  if (!report.interior_equilibrium) report.notes.emplace_back("no interior equilibrium");

  const auto ev = eigenvalues(interior_jacobian(model, p));
  report.eigenvalues.assign(ev.begin(), ev.end());
  report.verdict = classify_spectrum(report.eigenvalues, eps);
  return report;
}

}  // namespace tmkt
