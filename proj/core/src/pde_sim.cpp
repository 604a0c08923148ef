#include "tmkt/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tmkt/error.hpp"
#include "tmkt/patch_pde.hpp"

namespace tmkt {

Grid1D::Grid1D(double L, std::size_t n) : L_(L), n_(n) {
  if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("grid length must be > 0");
  if (n < kMinCells) throw PreconditionError("grid needs at least 16 cells");
}

Field::Field(std::size_t species, std::size_t n, double fill)
    : species_(species), n_(n), data_(species * n, fill) {}

void laplacian_neumann(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size();
  if (n < 3) throw PreconditionError("Neumann Laplacian needs at least 3 cells");
  if (out.size() != n) throw PreconditionError("Laplacian output size mismatch");
  const double inv_h2 = 1.0 / (h * h);
  out[0] = (f[1] - f[0]) * inv_h2;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
  out[n - 1] = (f[n - 2] - f[n - 1]) * inv_h2;
}

std::vector<double> laplacian_neumann(std::span<const double> f, double h) {
  std::vector<double> out(f.size());
  laplacian_neumann(f, h, out);
  return out;
}

std::string_view to_string(SimModel m) {
  switch (m) {
    case SimModel::simple: return "simple";
    case SimModel::ratio: return "ratio";
    case SimModel::patch: return "patch";
  }
  return "ratio";
}

std::string_view to_string(SimVerdict v) {
  switch (v) {
    case SimVerdict::converged: return "converged";
    case SimVerdict::pattern: return "pattern";
    case SimVerdict::diverged: return "diverged";
    case SimVerdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

void validate(const SimSystem& system) {
  if (system.model == SimModel::patch) {
    if (!system.patch) throw PreconditionError("patch simulation needs migration parameters");
    if (system.diffusion_country2 &&
        !DiffusionMatrix4(system.diffusion, *system.diffusion_country2).equal_blocks()) {
      throw EqualDiffusionError("condition d-k violated: patch simulation needs equal diffusion blocks");
    }
  }
}

std::vector<double> system_equilibrium(const SimSystem& system) {
  const Model kinetic = system.model == SimModel::simple ? Model::simple : Model::ratio;
  if (!interior_is_positive(kinetic, system.kinetics)) {
    throw PreconditionError("simulation needs a positive interior equilibrium");
  }
  const State2 eq = interior_equilibrium(kinetic, system.kinetics);
  if (system.model == SimModel::patch) return {eq.u, eq.v, eq.u, eq.v};
  return {eq.u, eq.v};
}

double stable_dt_bound(const SimSystem& system, const Grid1D& grid, double safety) {
  double row = system.diffusion.max_row_sum();
  if (system.model == SimModel::patch && system.diffusion_country2) {
    row = std::max(row, system.diffusion_country2->max_row_sum());
  }
  const double h = grid.h();
  if (row == 0.0) return safety * h * h;
  return safety * h * h / (2.0 * row);
}

Integrator::Integrator(SimSystem system, Grid1D grid, double scale)
    : system_(std::move(system)),
      grid_(grid),
      limit_(1e6 * std::max(scale, std::numeric_limits<double>::min())),
      k1_(system_.species(), grid.n()),
      k2_(system_.species(), grid.n()),
      k3_(system_.species(), grid.n()),
      k4_(system_.species(), grid.n()),
      stage_(system_.species(), grid.n()),
      lap_(system_.species(), grid.n()) {
  validate(system_);
}

void Integrator::rhs(const Field& in, Field& out) const {
  const std::size_t n = grid_.n();
  const double h = grid_.h();
  for (std::size_t s = 0; s < in.species(); ++s) {
    laplacian_neumann(in.component(s), h, lap_.component(s));
  }

  const auto diffuse = [&](std::size_t su, std::size_t sv, const DiffusionMatrix2& D) {
    const auto lu = lap_.component(su);
    const auto lv = lap_.component(sv);
    auto ou = out.component(su);
    auto ov = out.component(sv);
    for (std::size_t i = 0; i < n; ++i) {
      ou[i] = D.d11() * lu[i] - D.d12() * lv[i];
      ov[i] = -D.d21() * lu[i] + D.d22() * lv[i];
    }
  };
  diffuse(0, 1, system_.diffusion);
  if (system_.model == SimModel::patch) {
    diffuse(2, 3, system_.diffusion_country2.value_or(system_.diffusion));
  }
  if (system_.reaction == Reaction::disabled) return;

  const KineticParams& p = system_.kinetics;
  if (system_.model == SimModel::patch) {
    const PatchParams& q = *system_.patch;
    const auto u1 = in.component(0), v1 = in.component(1);
    const auto u2 = in.component(2), v2 = in.component(3);
    auto o1 = out.component(0), o2 = out.component(1);
    auto o3 = out.component(2), o4 = out.component(3);
    for (std::size_t i = 0; i < n; ++i) {
      const State4 r = patch_rhs(p, q, {u1[i], v1[i], u2[i], v2[i]});
      o1[i] += r.u1;
      o2[i] += r.v1;
      o3[i] += r.u2;
      o4[i] += r.v2;
    }
    return;
  }
  const Model kinetic = system_.model == SimModel::simple ? Model::simple : Model::ratio;
  const auto u = in.component(0), v = in.component(1);
  auto ou = out.component(0), ov = out.component(1);
  for (std::size_t i = 0; i < n; ++i) {
    const State2 r = tmkt::rhs(kinetic, p, {u[i], v[i]});
    ou[i] += r.u;
    ov[i] += r.v;
  }
}

StepStatus Integrator::step(Field& fields, double dt) {
  const auto y = fields.data();
  auto st = stage_.data();
  const auto axpy = [&](double c, const Field& k) {
    const auto kd = k.data();
    for (std::size_t j = 0; j < y.size(); ++j) st[j] = y[j] + c * kd[j];
  };
  rhs(fields, k1_);
  axpy(0.5 * dt, k1_);
  rhs(stage_, k2_);
  axpy(0.5 * dt, k2_);
  rhs(stage_, k3_);
  axpy(dt, k3_);
  rhs(stage_, k4_);

  const auto a = k1_.data(), b = k2_.data(), c = k3_.data(), d = k4_.data();
  const double w = dt / 6.0;
  bool ok = true;
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] += w * (a[j] + 2.0 * (b[j] + c[j]) + d[j]);
    if (!(std::abs(y[j]) <= limit_)) ok = false;
  }
  return ok ? StepStatus::ok : StepStatus::diverged;
}

StepStatus step(const SimSystem& system, const Grid1D& grid, Field& fields, double dt) {
  double scale = 0.0;
  for (double x : fields.data()) scale = std::max(scale, std::abs(x));
  Integrator integrator(system, grid, scale);
  return integrator.step(fields, dt);
}

void SimConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw PreconditionError("t_end must be > 0");
  if (!(safety > 0.0 && safety <= 1.0)) throw PreconditionError("safety must lie in (0, 1]");
  if (dt && !(*dt > 0.0)) throw PreconditionError("dt must be > 0");
  if (!(epsilon_ic >= 0.0)) throw PreconditionError("epsilon_ic must be >= 0");
  if (!(record_every >= 0.0)) throw PreconditionError("record_every must be >= 0");
  if (!(tol_conv > 0.0)) throw PreconditionError("tol_conv must be > 0");
}

Field perturbed_equilibrium(const SimSystem& system, const Grid1D& grid, double epsilon,
                            std::uint64_t seed) {
  const auto eq = system_equilibrium(system);
  Field f(system.species(), grid.n());
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < f.species(); ++s) {
    auto c = f.component(s);
    for (auto& x : c) {
      // 53 random bits -> [0, 1); independent of the standard library's
      // distribution implementation.
      const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x = eq[s] * (1.0 + epsilon * (2.0 * unit - 1.0));
    }
  }
  return f;
}

double relative_deviation(const Field& fields, std::span<const double> equilibrium) {
  double scale = 0.0;
  for (double e : equilibrium) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (std::size_t s = 0; s < fields.species(); ++s) {
    for (double x : fields.component(s)) {
      const double dev = std::abs(x - equilibrium[s]);
      worst = std::isnan(dev) ? std::numeric_limits<double>::infinity() : std::max(worst, dev);
    }
  }
  return worst / scale;
}

std::optional<int> dominant_cosine_mode(std::span<const double> f) {
  const std::size_t n = f.size();
  double mean = 0.0;
  for (double x : f) mean += x;
  mean /= static_cast<double>(n);
  std::optional<int> best;
  double best_amp = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += (f[i] - mean) *
             std::cos(std::numbers::pi * static_cast<double>(k) * (static_cast<double>(i) + 0.5) /
                      static_cast<double>(n));
    }
    if (std::abs(acc) > best_amp) {
      best_amp = std::abs(acc);
      best = static_cast<int>(k);
    }
  }
  return best;
}

namespace {

double field_range(const Field& f, double scale) {
  double worst = 0.0;
  for (std::size_t s = 0; s < f.species(); ++s) {
    const auto c = f.component(s);
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    worst = std::max(worst, *hi - *lo);
  }
  return worst / scale;
}

double field_min(const Field& f) {
  double lo = std::numeric_limits<double>::infinity();
  for (double x : f.data()) lo = std::min(lo, x);
  return lo;
}

}  // namespace

SimResult simulate(const SimSystem& system, const Grid1D& grid, const SimConfig& config) {
  return simulate(system, grid, config,
                  perturbed_equilibrium(system, grid, config.epsilon_ic, config.seed));
}

SimResult simulate(const SimSystem& system, const Grid1D& grid, const SimConfig& config,
                   Field initial) {
  config.validate();
  validate(system);
  if (initial.species() != system.species() || initial.n() != grid.n()) {
    throw PreconditionError("initial field does not match the system and grid");
  }
  SimResult result;
  result.equilibrium = system_equilibrium(system);
  double scale = 0.0;
  for (double e : result.equilibrium) scale = std::max(scale, std::abs(e));
  for (double x : initial.data()) scale = std::max(scale, std::abs(x));

  const double bound = stable_dt_bound(system, grid, config.safety);
  double dt = config.dt.value_or(bound);
  if (config.dt && *config.dt > bound) {
    throw PreconditionError("dt exceeds the explicit stability bound safety*h^2/(2*max row sum)");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(config.t_end / dt - 1e-9));
  dt = config.t_end / static_cast<double>(steps);
  result.dt = dt;

  const double every = config.record_every > 0.0 ? config.record_every : config.t_end / 200.0;
  double next_record = every;

  Integrator integrator(system, grid, scale);
  Field fields = std::move(initial);
  double min_value = field_min(fields);
  const auto record = [&](double t) {
    result.deviation.push_back({t, relative_deviation(fields, result.equilibrium)});
    min_value = std::min(min_value, field_min(fields));
    if (config.keep_snapshots) result.snapshots.push_back({t, fields});
  };
  record(0.0);

  bool diverged = false;
  std::size_t done = 0;
  try {
    while (done < steps) {
      if (integrator.step(fields, dt) == StepStatus::diverged) {
        diverged = true;
        result.note = "divergence guard tripped";
        ++done;
        break;
      }
      ++done;
      const double t = static_cast<double>(done) * dt;
      if (t >= next_record - 0.5 * dt || done == steps) {
        record(t);
        while (next_record <= t + 0.5 * dt) next_record += every;
      }
    }
  } catch (const DomainError& e) {
    diverged = true;
    result.note = e.what();
  }
  result.steps = done;
  result.t_reached = static_cast<double>(done) * dt;
  if (diverged && (result.deviation.empty() || result.deviation.back().t != result.t_reached)) {
    result.deviation.push_back({result.t_reached, relative_deviation(fields, result.equilibrium)});
  }
  result.final_deviation = relative_deviation(fields, result.equilibrium);
  result.min_value = std::min(min_value, field_min(fields));
  if (result.min_value < 0.0 && result.note.empty()) result.note = "negative densities reached";

  std::vector<double> dev0(fields.component(0).begin(), fields.component(0).end());
  for (auto& x : dev0) x -= result.equilibrium[0];
  if (!diverged) result.dominant_mode = dominant_cosine_mode(dev0);

  const double eq_scale = *std::max_element(result.equilibrium.begin(), result.equilibrium.end());
  if (diverged) {
    result.verdict = SimVerdict::diverged;
  } else if (result.final_deviation < config.tol_conv) {
    result.verdict = SimVerdict::converged;
  } else if (result.final_deviation > 1e3 * config.epsilon_ic &&
             field_range(fields, eq_scale) > 10.0 * config.tol_conv) {
    result.verdict = SimVerdict::pattern;
  } else {
    result.verdict = SimVerdict::undetermined;
  }
  result.final_fields = std::move(fields);
  return result;
}

}  // namespace tmkt
