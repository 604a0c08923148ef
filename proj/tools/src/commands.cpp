#include "tmkt/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tmkt/error.hpp"
#include "tmkt/format.hpp"
#include "tmkt/patch.hpp"
#include "tmkt/patch_pde.hpp"
#include "tmkt/pde_io.hpp"
#include "tmkt/pde_sim.hpp"

namespace tmkt::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMinPatchModes = 200;

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_json(const std::optional<T>& x) {
  if (!x) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number(*x);
  } else {
    return Json(*x);
  }
}

Json to_json(const ConditionResult& c) {
  return Json{{"id", std::string(label(c.id))}, {"holds", c.holds}, {"margin", number(c.margin)}};
}

Json to_json(std::span<const ConditionResult> cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(to_json(c));
  return out;
}

Json to_json(std::span<const Complex> values) {
  Json out = Json::array();
  for (const auto& z : values) out.push_back(Json{{"re", number(z.real())}, {"im", number(z.imag())}});
  return out;
}

Json to_json(const Matrix2& m) {
  return Json::array({Json::array({number(m.a11), number(m.a12)}),
                      Json::array({number(m.a21), number(m.a22)})});
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["all_hold"] = r.all_hold();
  j["interior_equilibrium"] = r.interior_equilibrium;
  j["mode"] = optional_json(r.mode);
  j["conditions"] = to_json(std::span<const ConditionResult>(r.conditions));
  j["eigenvalues"] = to_json(std::span<const Complex>(r.eigenvalues));
  j["notes"] = r.notes;
  return j;
}

Json to_json(const TuringReport& t, double L, int k_max) {
  Json j;
  j["verdict"] = std::string(to_string(t.verdict));
  j["kinetically_stable"] = t.kinetically_stable;
  j["stable_sufficient"] = t.stable_sufficient;
  j["d12_sufficient_bound"] = optional_json(t.d12_sufficient_bound);
  j["d12_exact_threshold"] = optional_json(t.d12_exact_threshold);
  j["critical_mode"] = optional_json(t.critical_mode);
  j["least_stable_mode"] = t.least_stable_mode;
  j["max_re"] = number(t.max_re);
  j["trace_decreasing"] = t.curve.trace_decreasing;
  j["L"] = number(L);
  j["k_max"] = k_max;
  return j;
}

Json equilibria_json(const std::vector<Equilibrium>& eqs) {
  Json out = Json::array();
  for (const auto& e : eqs) {
    out.push_back(Json{{"label", e.label},
                       {"u", number(e.state.u)},
                       {"v", number(e.state.v)},
                       {"positive", e.positive},
                       {"note", e.note}});
  }
  return out;
}

std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (config.output_dir) return *config.output_dir;
  return "tmkt_out";
}

std::optional<std::filesystem::path> optional_output_dir(const RunConfig& config,
                                                         const CommandOptions& opts) {
  if (opts.out_dir) return opts.out_dir;
  return config.output_dir;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
  return os;
}

void emit(const Json& j, std::ostream& out, const std::optional<std::filesystem::path>& dir,
          const std::string& name) {
  const std::string text = j.dump(2) + "\n";
  if (dir) open_output(*dir, name) << text;
  out << text;
}

DiffusionMatrix2 well_posed(const DiffusionCoeffs& c, const char* where) {
  if (!(c.det() > 0.0)) {
    throw ConfigError(std::string("'") + where + "' must satisfy d11*d22 - d12*d21 > 0, got " +
                      format_double(c.det()));
  }
  return c.matrix();
}

const DiffusionCoeffs& require_diffusion(const RunConfig& config) {
  if (!config.diffusion) throw ConfigError("missing key 'diffusion'");
  return *config.diffusion;
}

double country2_length(const RunConfig& config) {
  return config.domain.L2.value_or(config.domain.L);
}

DiffusionMatrix4 diffusion4(const RunConfig& config) {
  const DiffusionMatrix2 c1 = well_posed(*config.diffusion, "diffusion");
  const DiffusionMatrix2 c2 =
      config.diffusion2 ? well_posed(*config.diffusion2, "diffusion2") : c1;
  return DiffusionMatrix4::from_native(c1, c2, config.domain.L, country2_length(config));
}

int mode_count(const RunConfig& config, const Matrix2& A, const DiffusionMatrix2& D) {
  if (config.domain.k_max) return *config.domain.k_max;
  return default_k_max(A, D, config.domain.L);
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::stable: return 0;
      case Verdict::marginal: return 1;
      case Verdict::unstable: return 2;
    }
    return 2;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

std::vector<ConditionResult> Evaluation::merged_conditions() const {
  std::map<ConditionId, ConditionResult> seen;
  auto add = [&](std::span<const ConditionResult> cs) {
    for (const auto& c : cs) seen.try_emplace(c.id, c);
  };
  add(kinetic.conditions);
  add(cross_diffusion);
  if (thm42) add(thm42->conditions);
  if (thm43) add(thm43->conditions);
  if (thm44) add(thm44->conditions);
  std::vector<ConditionResult> out;
  for (ConditionId id : all_conditions()) {
    if (auto it = seen.find(id); it != seen.end()) out.push_back(it->second);
  }
  return out;
}

Evaluation evaluate(const RunConfig& config) {
  Evaluation ev;
  const KineticParams p = config.kinetic.params();
  const Model model = config.kinetic_model();
  ev.equilibria = model == Model::simple ? simple_equilibria(p) : ratio_equilibria(p);
  ev.kinetic = check_kinetic_stability(model, p);
  ev.notes = ev.kinetic.notes;
  ev.verdict = ev.kinetic.verdict;

  if (config.model != ModelKind::patch) {
    if (!config.diffusion) return ev;
    const DiffusionCoeffs& c = *config.diffusion;
    ev.cross_diffusion = cross_diffusion_conditions(model, p, c.d11, c.d12, c.d21, c.d22);
    if (!(c.det() > 0.0)) {
      ev.verdict = Verdict::unstable;
      ev.notes.emplace_back("det D <= 0: diffusion operator is ill-posed");
      return ev;
    }
    if (!ev.kinetic.interior_equilibrium) return ev;
    const Matrix2 A = interior_jacobian(model, p);
    const DiffusionMatrix2 D = c.matrix();
    ev.k_max = mode_count(config, A, D);
    ev.turing = classify(A, D, SpatialDomain(config.domain.L, ev.k_max));
    ev.verdict = ev.turing->verdict;
    return ev;
  }

  const PatchParams q = config.patch->params();
  ev.thm42 = check_thm42(p, q);
  ev.thm43 = check_thm43(p, q);
  ev.verdict = ev.thm42->verdict;
  if (!config.diffusion) return ev;
  const DiffusionCoeffs& c = *config.diffusion;
  ev.cross_diffusion = cross_diffusion_conditions(Model::ratio, p, c.d11, c.d12, c.d21, c.d22);
  if (!(c.det() > 0.0) || (config.diffusion2 && !(config.diffusion2->det() > 0.0))) {
    ev.verdict = Verdict::unstable;
    ev.thm44_skipped = "det D <= 0: diffusion operator is ill-posed";
    ev.notes.push_back(ev.thm44_skipped);
    return ev;
  }
  const DiffusionMatrix4 D4 = diffusion4(config);
  if (!D4.equal_blocks()) {
    ev.thm44_skipped = "condition d-k fails: country diffusion blocks differ after rescaling";
    ev.notes.push_back(ev.thm44_skipped);
    ev.cross_diffusion.push_back({ConditionId::dk, false, -1.0});
    return ev;
  }
  const DiffusionMatrix2& D = D4.country1();
  int k_max = kMinPatchModes;
  if (config.domain.k_max) {
    k_max = *config.domain.k_max;
  } else if (ev.kinetic.interior_equilibrium) {
    k_max = std::max(k_max, default_k_max(interior_jacobian(Model::ratio, p), D, config.domain.L));
  }
  ev.k_max = k_max;
  ev.thm44 = check_thm44(p, q, D4, TwoCountryDomain(config.domain.L, country2_length(config), k_max));
  ev.verdict = worst(ev.verdict, ev.thm44->verdict);
  return ev;
}

void cmd_analyze(const RunConfig& config, const CommandOptions& opts, std::ostream& out) {
  const Evaluation ev = evaluate(config);
  Json j;
  j["command"] = "analyze";
  j["model"] = std::string(to_string(config.model));
  j["verdict"] = std::string(to_string(ev.verdict));
  j["equilibria"] = equilibria_json(ev.equilibria);
  j["kinetic"] = to_json(ev.kinetic);
  if (config.diffusion) {
    j["cross_diffusion"] = to_json(std::span<const ConditionResult>(ev.cross_diffusion));
  }
  if (ev.turing) j["turing"] = to_json(*ev.turing, config.domain.L, ev.k_max);
  if (ev.thm42) j["thm42"] = to_json(*ev.thm42);
  if (ev.thm43) j["thm43"] = to_json(*ev.thm43);
  if (ev.thm44) j["thm44"] = to_json(*ev.thm44);
  if (!ev.thm44_skipped.empty()) j["thm44_skipped"] = ev.thm44_skipped;
  j["conditions"] = to_json(std::span<const ConditionResult>(ev.merged_conditions()));
  j["notes"] = ev.notes;
  emit(j, out, optional_output_dir(config, opts), "analyze.json");
}

void cmd_dispersion(const RunConfig& config, const CommandOptions& opts, std::ostream& out) {
  const DiffusionMatrix2 D = well_posed(require_diffusion(config), "diffusion");
  const Model model = config.kinetic_model();
  const KineticParams p = config.kinetic.params();
  if (!interior_is_positive(model, p)) {
    throw ConfigError("dispersion needs a positive interior equilibrium");
  }
  const Matrix2 A = interior_jacobian(model, p);
  const int k_max = mode_count(config, A, D);
  const TuringReport t = classify(A, D, SpatialDomain(config.domain.L, k_max));

  const auto dir = output_dir(config, opts);
  {
    auto os = open_output(dir, "dispersion.csv");
    write_csv(os, t.curve);
  }
  Json j;
  j["command"] = "dispersion";
  j["model"] = std::string(to_string(config.model));
  j["kinetic_matrix"] = to_json(A);
  j["turing"] = to_json(t, config.domain.L, k_max);
  emit(j, out, dir, "turing.json");
}

void cmd_patch_check(const RunConfig& config, const CommandOptions& opts, std::ostream& out) {
  if (config.model != ModelKind::patch) throw ConfigError("patch-check needs model 'patch'");
  const Evaluation ev = evaluate(config);
  const KineticParams p = config.kinetic.params();
  const PatchParams q = config.patch->params();
  const State2 eq = interior_equilibrium(Model::ratio, p);

  Json j;
  j["command"] = "patch-check";
  j["verdict"] = std::string(to_string(ev.verdict));
  j["equilibrium"] = Json{{"u", number(eq.u)}, {"v", number(eq.v)}};
  const Matrix2 G = migration_block(q, eq);
  const auto [A, B] = block_factor(patch_jacobian(p), gamma_matrix(q, eq));
  j["A_r"] = to_json(A);
  j["G"] = to_json(G);
  j["B"] = to_json(B);
  const auto eigA = eigenvalues(A);
  const auto eigB = eigenvalues(B);
  j["eigenvalues_A_r"] = to_json(std::span<const Complex>(eigA));
  j["eigenvalues_B"] = to_json(std::span<const Complex>(eigB));
  j["delta1_bound"] = number(delta1_bound(p, q));
  if (config.diffusion && config.diffusion->det() > 0.0) {
    j["d12_two_country_bound"] = number(two_country_d12_bound(p, q, config.diffusion->matrix()));
  }
  j["thm42"] = to_json(*ev.thm42);
  j["thm43"] = to_json(*ev.thm43);
  if (ev.thm44) j["thm44"] = to_json(*ev.thm44);
  if (!ev.thm44_skipped.empty()) j["thm44_skipped"] = ev.thm44_skipped;
  j["notes"] = ev.notes;
  emit(j, out, optional_output_dir(config, opts), "patch_check.json");
}

void cmd_simulate(const RunConfig& config, const CommandOptions& opts, std::ostream& out) {
  const DiffusionMatrix2 D = well_posed(require_diffusion(config), "diffusion");
  const KineticParams p = config.kinetic.params();
  SimSystem system{SimModel::ratio, p, D, std::nullopt, std::nullopt, Reaction::enabled};
  if (config.model == ModelKind::simple) system.model = SimModel::simple;
  if (config.model == ModelKind::patch) {
    system.model = SimModel::patch;
    system.patch = config.patch->params();
    system.diffusion_country2 = diffusion4(config).country2();
  }
  try {
    validate(system);
    (void)system_equilibrium(system);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  const Grid1D grid(config.domain.L, config.domain.n);
  SimConfig sim = config.simulation;
  sim.keep_snapshots = config.write_snapshots;
  const SimResult res = simulate(system, grid, sim);

  const auto dir = output_dir(config, opts);
  {
    auto os = open_output(dir, "deviation.csv");
    write_deviation_csv(os, res.deviation);
  }
  {
    auto os = open_output(dir, "final_profile.csv");
    write_snapshot_csv(os, grid, res.final_fields);
  }
  {
    auto os = open_output(dir, "final_profile.svg");
    write_profile_svg(os, grid, res.final_fields);
  }
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", i);
    auto os = open_output(dir / "snapshots", name);
    write_snapshot_csv(os, grid, res.snapshots[i].fields);
  }

  Json j;
  j["command"] = "simulate";
  j["model"] = std::string(to_string(system.model));
  j["verdict"] = std::string(to_string(res.verdict));
  Json eq = Json::array();
  for (double x : res.equilibrium) eq.push_back(number(x));
  j["equilibrium"] = eq;
  j["final_deviation"] = number(res.final_deviation);
  j["dominant_mode"] = optional_json(res.dominant_mode);
  if (system.model != SimModel::patch) {
    const Matrix2 A = interior_jacobian(config.kinetic_model(), p);
    const int k_max = mode_count(config, A, D);
    const TuringReport t = classify(A, D, SpatialDomain(config.domain.L, k_max));
    j["dispersion_critical_mode"] = optional_json(t.critical_mode);
    j["dispersion_least_stable_mode"] = t.least_stable_mode;
  }
  j["dt"] = number(res.dt);
  j["steps"] = res.steps;
  j["t_reached"] = number(res.t_reached);
  j["min_value"] = number(res.min_value);
  j["seed"] = sim.seed;
  j["n"] = grid.n();
  j["snapshots"] = res.snapshots.size();
  j["note"] = res.note;
  emit(j, out, dir, "simulate.json");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--range must look like lo:hi");
  auto read = [&](const std::string& part) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(part, &used);
    } catch (const std::exception&) {
      throw ConfigError("--range bound '" + part + "' is not a number");
    }
    if (used != part.size() || !std::isfinite(x)) {
      throw ConfigError("--range bound '" + part + "' is not a finite number");
    }
    return x;
  };
  const double lo = read(text.substr(0, colon));
  const double hi = read(text.substr(colon + 1));
  if (!(lo < hi)) throw ConfigError("--range is empty: need lo < hi");
  return {lo, hi};
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

namespace {

struct SweepRow {
  double x = 0.0;
  bool valid = false;
  Verdict verdict = Verdict::marginal;
  std::vector<ConditionResult> conditions;
  std::string error;
};

SweepRow sweep_point(const RunConfig& base, const std::string& axis, double x) {
  SweepRow row;
  row.x = x;
  RunConfig c = base;
  set_parameter(c, axis, x);
  try {
    const Evaluation ev = evaluate(c);
    row.valid = true;
    row.verdict = ev.verdict;
    row.conditions = ev.merged_conditions();
  } catch (const DomainError& e) {
    row.error = e.what();
  } catch (const std::invalid_argument& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

void cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out) {
  if (!opts.sweep) throw ConfigError("sweep needs --axis, --range and --steps");
  const SweepSpec& spec = *opts.sweep;
  if (!(spec.lo < spec.hi)) throw ConfigError("--range is empty: need lo < hi");
  if (spec.steps < 1) throw ConfigError("--steps must be >= 1");
  (void)get_parameter(config, spec.axis);

  const std::size_t count = static_cast<std::size_t>(spec.steps) + 1;
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / spec.steps;
  }
  xs.back() = spec.hi;

  std::vector<SweepRow> rows(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = sweep_point(config, spec.axis, xs[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = sweep_threads(count);
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<ConditionId> columns;
  for (ConditionId id : all_conditions()) {
    const bool used = std::any_of(rows.begin(), rows.end(), [&](const SweepRow& r) {
      return std::any_of(r.conditions.begin(), r.conditions.end(),
                         [&](const ConditionResult& c) { return c.id == id; });
    });
    if (used) columns.push_back(id);
  }
  auto find = [](const SweepRow& r, ConditionId id) -> const ConditionResult* {
    for (const auto& c : r.conditions) {
      if (c.id == id) return &c;
    }
    return nullptr;
  };

  const auto dir = output_dir(config, opts);
  {
    auto os = open_output(dir, "sweep.csv");
    os << "index," << spec.axis << ",verdict";
    for (ConditionId id : columns) os << ',' << label(id);
    os << '\n';
    for (std::size_t i = 0; i < count; ++i) {
      const SweepRow& r = rows[i];
      os << i << ',' << format_double(r.x) << ','
         << (r.valid ? std::string(to_string(r.verdict)) : std::string("invalid"));
      for (ConditionId id : columns) {
        os << ',';
        if (const auto* c = find(r, id)) os << format_double(c->margin);
      }
      os << '\n';
    }
  }

  Json boundaries = Json::array();
  std::size_t invalid = 0;
  for (const auto& r : rows) invalid += r.valid ? 0 : 1;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const SweepRow& a = rows[i];
    const SweepRow& b = rows[i + 1];
    if (!a.valid || !b.valid) continue;
    if (a.verdict != b.verdict) {
      boundaries.push_back(Json{{"id", "verdict"},
                                {"lo", number(a.x)},
                                {"hi", number(b.x)},
                                {"from", std::string(to_string(a.verdict))},
                                {"to", std::string(to_string(b.verdict))}});
    }
    for (ConditionId id : columns) {
      const auto* ca = find(a, id);
      const auto* cb = find(b, id);
      if (ca && cb && ca->holds != cb->holds) {
        boundaries.push_back(Json{{"id", std::string(label(id))},
                                  {"lo", number(a.x)},
                                  {"hi", number(b.x)},
                                  {"from", ca->holds},
                                  {"to", cb->holds}});
      }
    }
  }
  Json errors = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    if (!rows[i].valid) errors.push_back(Json{{"index", i}, {"x", number(rows[i].x)}, {"error", rows[i].error}});
  }

  Json j;
  j["command"] = "sweep";
  j["model"] = std::string(to_string(config.model));
  j["axis"] = spec.axis;
  j["lo"] = number(spec.lo);
  j["hi"] = number(spec.hi);
  j["steps"] = spec.steps;
  j["points"] = count;
  j["invalid_points"] = invalid;
  j["boundaries"] = boundaries;
  j["errors"] = errors;
  emit(j, out, dir, "sweep.json");
}

}  // namespace tmkt::cli
