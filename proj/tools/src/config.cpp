#include "tmkt/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tmkt/error.hpp"

namespace tmkt::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) {
      throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

const json& require_key(const json& j, const std::string& where, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("missing key '" + (where.empty() ? std::string(key) : where + "." + key) +
                      "'");
  }
  return *it;
}

double number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("'" + name + "' must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + name + "' must be finite");
  return x;
}

double read_number(const json& j, const std::string& where, const char* key) {
  return number(require_key(j, where, key), where + "." + key);
}

double read_optional(const json& j, const std::string& where, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, where + "." + key);
}

KineticCoeffs parse_kinetic(const json& j) {
  require_object(j, "kinetic");
  reject_unknown(j, "kinetic", {"r", "K", "m", "d", "a"});
  KineticCoeffs k;
  k.r = read_number(j, "kinetic", "r");
  k.K = read_number(j, "kinetic", "K");
  k.m = read_number(j, "kinetic", "m");
  k.d = read_number(j, "kinetic", "d");
  k.a = read_optional(j, "kinetic", "a", 1.0);
  return k;
}

DiffusionCoeffs parse_diffusion(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, where, {"d11", "d12", "d21", "d22"});
  DiffusionCoeffs c;
  c.d11 = read_number(j, where, "d11");
  c.d12 = read_number(j, where, "d12");
  c.d21 = read_number(j, where, "d21");
  c.d22 = read_number(j, where, "d22");
  for (double x : {c.d11, c.d12, c.d21, c.d22}) {
    if (x < 0.0) throw ConfigError("'" + where + "' coefficients must be >= 0");
  }
  return c;
}

MigrationSpec parse_migration(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, where, {"family", "alpha"});
  const json& fam = require_key(j, where, "family");
  if (!fam.is_string()) throw ConfigError("'" + where + ".family' must be a string");
  MigrationSpec spec;
  const auto name = fam.get<std::string>();
  if (name == "rational") {
    spec.family = MigrationFunction::Family::rational;
    spec.alpha = read_number(j, where, "alpha");
  } else if (name == "constant") {
    spec.family = MigrationFunction::Family::constant;
    if (j.contains("alpha")) throw ConfigError("'" + where + ".alpha' is not used by 'constant'");
    spec.alpha = 1.0;
  } else {
    throw ConfigError("'" + where + ".family' must be 'rational' or 'constant'");
  }
  return spec;
}

PatchCoeffs parse_patch(const json& j) {
  require_object(j, "patch");
  reject_unknown(j, "patch", {"delta1", "delta2", "rho1", "rho2"});
  PatchCoeffs c;
  c.delta1 = read_number(j, "patch", "delta1");
  c.delta2 = read_number(j, "patch", "delta2");
  c.rho1 = parse_migration(require_key(j, "patch", "rho1"), "patch.rho1");
  c.rho2 = parse_migration(require_key(j, "patch", "rho2"), "patch.rho2");
  return c;
}

DomainSpec parse_domain(const json& j) {
  require_object(j, "domain");
  reject_unknown(j, "domain", {"L", "L2", "k_max", "n"});
  DomainSpec d;
  d.L = read_number(j, "domain", "L");
  if (j.contains("L2")) d.L2 = read_number(j, "domain", "L2");
  if (j.contains("k_max")) {
    const json& k = j.at("k_max");
    if (!k.is_number_integer() || k.get<long long>() < 0 || k.get<long long>() > 1'000'000) {
      throw ConfigError("'domain.k_max' must be an integer in [0, 1000000]");
    }
    d.k_max = static_cast<int>(k.get<long long>());
  }
  if (j.contains("n")) {
    const json& n = j.at("n");
    if (!n.is_number_integer() || n.get<long long>() < static_cast<long long>(Grid1D::kMinCells)) {
      throw ConfigError("'domain.n' must be an integer >= " + std::to_string(Grid1D::kMinCells));
    }
    d.n = static_cast<std::size_t>(n.get<long long>());
  }
  return d;
}

std::uint64_t parse_seed(const json& j) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long long>() < 0)) {
    throw ConfigError("'simulation.seed' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

SimConfig parse_simulation(const json& j, bool& write_snapshots) {
  require_object(j, "simulation");
  reject_unknown(j, "simulation", {"t_end", "dt", "safety", "epsilon_ic", "seed",
                                   "record_every", "tol_conv", "write_snapshots"});
  SimConfig c;
  c.t_end = read_optional(j, "simulation", "t_end", c.t_end);
  if (auto it = j.find("dt"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "auto") {
        throw ConfigError("'simulation.dt' must be a number or \"auto\"");
      }
    } else {
      c.dt = number(*it, "simulation.dt");
    }
  }
  c.safety = read_optional(j, "simulation", "safety", c.safety);
  c.epsilon_ic = read_optional(j, "simulation", "epsilon_ic", c.epsilon_ic);
  if (auto it = j.find("seed"); it != j.end()) c.seed = parse_seed(*it);
  c.record_every = read_optional(j, "simulation", "record_every", c.record_every);
  c.tol_conv = read_optional(j, "simulation", "tol_conv", c.tol_conv);
  if (auto it = j.find("write_snapshots"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError("'simulation.write_snapshots' must be a boolean");
    write_snapshots = it->get<bool>();
  }
  try {
    c.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("simulation: ") + e.what());
  }
  return c;
}

ModelKind parse_model(const json& j) {
  if (!j.is_string()) throw ConfigError("'model' must be a string");
  const auto name = j.get<std::string>();
  if (name == "simple") return ModelKind::simple;
  if (name == "ratio") return ModelKind::ratio;
  if (name == "patch") return ModelKind::patch;
  throw ConfigError("'model' must be one of 'simple', 'ratio', 'patch'");
}

// Runs the library constructors so invalid combinations surface as config
// errors at load time.
void check_consistency(const RunConfig& c) {
  try {
    (void)c.kinetic.params();
    if (c.patch) (void)c.patch->params();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (!(c.domain.L > 0.0)) throw ConfigError("'domain.L' must be > 0");
  if (c.domain.L2 && !(*c.domain.L2 > 0.0)) throw ConfigError("'domain.L2' must be > 0");
  if (c.model != ModelKind::patch) {
    if (c.patch) throw ConfigError("'patch' requires model 'patch'");
    if (c.diffusion2) throw ConfigError("'diffusion2' requires model 'patch'");
    if (c.domain.L2) throw ConfigError("'domain.L2' requires model 'patch'");
  } else if (!c.patch) {
    throw ConfigError("missing key 'patch'");
  }
  if (c.diffusion2 && !c.diffusion) throw ConfigError("'diffusion2' requires 'diffusion'");
}

double* parameter_slot(RunConfig& c, std::string_view path) {
  const std::string p(path);
  auto need = [&](bool present, const char* section) {
    if (!present) throw ConfigError("axis '" + p + "' needs section '" + section + "'");
  };
  if (p == "kinetic.r") return &c.kinetic.r;
  if (p == "kinetic.K") return &c.kinetic.K;
  if (p == "kinetic.m") return &c.kinetic.m;
  if (p == "kinetic.d") return &c.kinetic.d;
  if (p == "kinetic.a") return &c.kinetic.a;
  if (p.starts_with("diffusion.")) {
    need(c.diffusion.has_value(), "diffusion");
    if (p == "diffusion.d11") return &c.diffusion->d11;
    if (p == "diffusion.d12") return &c.diffusion->d12;
    if (p == "diffusion.d21") return &c.diffusion->d21;
    if (p == "diffusion.d22") return &c.diffusion->d22;
  }
  if (p.starts_with("diffusion2.")) {
    need(c.diffusion2.has_value(), "diffusion2");
    if (p == "diffusion2.d11") return &c.diffusion2->d11;
    if (p == "diffusion2.d12") return &c.diffusion2->d12;
    if (p == "diffusion2.d21") return &c.diffusion2->d21;
    if (p == "diffusion2.d22") return &c.diffusion2->d22;
  }
  if (p.starts_with("patch.")) {
    need(c.patch.has_value(), "patch");
    if (p == "patch.delta1") return &c.patch->delta1;
    if (p == "patch.delta2") return &c.patch->delta2;
    auto alpha = [&](MigrationSpec& s) {
      if (s.family != MigrationFunction::Family::rational) {
        throw ConfigError("axis '" + p + "' needs the rational family");
      }
      return &s.alpha;
    };
    if (p == "patch.rho1.alpha") return alpha(c.patch->rho1);
    if (p == "patch.rho2.alpha") return alpha(c.patch->rho2);
  }
  if (p == "domain.L") return &c.domain.L;
  if (p == "domain.L2") {
    if (c.model != ModelKind::patch) throw ConfigError("axis 'domain.L2' requires model 'patch'");
    if (!c.domain.L2) c.domain.L2 = c.domain.L;
    return &*c.domain.L2;
  }
  throw ConfigError("unknown parameter path '" + p + "'");
}

}  // namespace

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::simple: return "simple";
    case ModelKind::ratio: return "ratio";
    case ModelKind::patch: return "patch";
  }
  return "?";
}

MigrationFunction MigrationSpec::function() const {
  return family == MigrationFunction::Family::constant ? MigrationFunction::constant()
                                                       : MigrationFunction::rational(alpha);
}

PatchParams PatchCoeffs::params() const {
  return {delta1, delta2, rho1.function(), rho2.function()};
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  require_object(root, "<root>");
  reject_unknown(root, "", {"schema_version", "model", "kinetic", "diffusion", "diffusion2",
                            "patch", "domain", "simulation", "output_dir"});
  const json& version = require_key(root, "", "schema_version");
  if (!version.is_number_integer() || version.get<long long>() != 1) {
    throw ConfigError("'schema_version' must be 1");
  }

  RunConfig c;
  c.model = parse_model(require_key(root, "", "model"));
  c.kinetic = parse_kinetic(require_key(root, "", "kinetic"));
  if (root.contains("diffusion")) c.diffusion = parse_diffusion(root.at("diffusion"), "diffusion");
  if (root.contains("diffusion2")) {
    c.diffusion2 = parse_diffusion(root.at("diffusion2"), "diffusion2");
  }
  if (root.contains("patch")) c.patch = parse_patch(root.at("patch"));
  if (root.contains("domain")) c.domain = parse_domain(root.at("domain"));
  if (root.contains("simulation")) {
    c.simulation = parse_simulation(root.at("simulation"), c.write_snapshots);
  }
  if (root.contains("output_dir")) {
    const json& out = root.at("output_dir");
    if (!out.is_string()) throw ConfigError("'output_dir' must be a string");
    c.output_dir = out.get<std::string>();
  }
  check_consistency(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void set_parameter(RunConfig& config, std::string_view path, double value) {
  *parameter_slot(config, path) = value;
}

double get_parameter(const RunConfig& config, std::string_view path) {
  RunConfig copy = config;
  return *parameter_slot(copy, path);
}

}  // namespace tmkt::cli
