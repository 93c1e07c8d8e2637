#include "vpmc/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "vpmc/errors.hpp"
#include "vpmc/io.hpp"

namespace vpmc::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  return d;
}

long to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return static_cast<long>(d);
}

std::string kind_name(hermite::EquilibriumKind k) {
  switch (k) {
    case hermite::EquilibriumKind::Maxwellian: return "maxwellian";
    case hermite::EquilibriumKind::TwoStream: return "two-stream";
    case hermite::EquilibriumKind::BumpOnTail: return "bump-on-tail";
  }
  return "?";
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  using io::format_double;
  static const std::vector<Key> table = {
      {"equilibrium.kind",
       [](RunConfig& c, const std::string& v) {
         const auto keep = c.equilibrium;
         if (v == "maxwellian") {
           c.equilibrium = hermite::Equilibrium::maxwellian(0.0, 1.0);
         } else if (v == "two-stream") {
           c.equilibrium = hermite::Equilibrium::two_stream(keep.vbar);
         } else if (v == "bump-on-tail") {
           c.equilibrium = hermite::Equilibrium::bump_on_tail(keep.omega1, keep.omega2, keep.u, keep.vt);
         } else {
           throw ConfigError("equilibrium.kind", "expected maxwellian, two-stream or bump-on-tail, got '" + v + "'");
         }
         if (v == "maxwellian") {
           c.equilibrium.u = keep.u;
           c.equilibrium.vt = keep.vt;
         }
         c.has_equilibrium = true;
       },
       [](const RunConfig& c) { return kind_name(c.equilibrium.kind); }},
      {"equilibrium.vbar", [](RunConfig& c, const std::string& v) { c.equilibrium.vbar = to_double("equilibrium.vbar", v); },
       [](const RunConfig& c) { return format_double(c.equilibrium.vbar); }},
      {"equilibrium.omega1", [](RunConfig& c, const std::string& v) { c.equilibrium.omega1 = to_double("equilibrium.omega1", v); },
       [](const RunConfig& c) { return format_double(c.equilibrium.omega1); }},
      {"equilibrium.omega2", [](RunConfig& c, const std::string& v) { c.equilibrium.omega2 = to_double("equilibrium.omega2", v); },
       [](const RunConfig& c) { return format_double(c.equilibrium.omega2); }},
      {"equilibrium.u", [](RunConfig& c, const std::string& v) { c.equilibrium.u = to_double("equilibrium.u", v); },
       [](const RunConfig& c) { return format_double(c.equilibrium.u); }},
      {"equilibrium.vt", [](RunConfig& c, const std::string& v) { c.equilibrium.vt = to_double("equilibrium.vt", v); },
       [](const RunConfig& c) { return format_double(c.equilibrium.vt); }},
      {"grid.length", [](RunConfig& c, const std::string& v) { c.length = to_double("grid.length", v); },
       [](const RunConfig& c) { return format_double(c.length); }},
      {"grid.nx", [](RunConfig& c, const std::string& v) { c.nx = static_cast<int>(to_int("grid.nx", v)); },
       [](const RunConfig& c) { return std::to_string(c.nx); }},
      {"grid.vmin", [](RunConfig& c, const std::string& v) { c.vmin = to_double("grid.vmin", v); },
       [](const RunConfig& c) { return format_double(c.vmin); }},
      {"grid.vmax", [](RunConfig& c, const std::string& v) { c.vmax = to_double("grid.vmax", v); },
       [](const RunConfig& c) { return format_double(c.vmax); }},
      {"grid.nv", [](RunConfig& c, const std::string& v) { c.nv = static_cast<int>(to_int("grid.nv", v)); },
       [](const RunConfig& c) { return std::to_string(c.nv); }},
      {"perturbation.shape",
       [](RunConfig& c, const std::string& v) {
         if (v == "cos") {
           c.perturbation.shape = kinetic::Perturbation::Shape::Cos;
         } else if (v == "sin") {
           c.perturbation.shape = kinetic::Perturbation::Shape::Sin;
         } else {
           throw ConfigError("perturbation.shape", "expected cos or sin, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.perturbation.shape == kinetic::Perturbation::Shape::Cos ? "cos" : "sin"); }},
      {"perturbation.wavenumber",
       [](RunConfig& c, const std::string& v) { c.perturbation.wavenumber = to_double("perturbation.wavenumber", v); },
       [](const RunConfig& c) { return format_double(c.perturbation.wavenumber); }},
      {"perturbation.amplitude",
       [](RunConfig& c, const std::string& v) { c.perturbation.amplitude = to_double("perturbation.amplitude", v); },
       [](const RunConfig& c) { return format_double(c.perturbation.amplitude); }},
      {"rho_ion",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") {
           c.rho_ion.reset();
         } else {
           c.rho_ion = to_double("rho_ion", v);
         }
       },
       [](const RunConfig& c) { return c.rho_ion ? format_double(*c.rho_ion) : std::string("auto"); }},
      {"moments.order", [](RunConfig& c, const std::string& v) { c.order = static_cast<int>(to_int("moments.order", v)); },
       [](const RunConfig& c) { return std::to_string(c.order); }},
      {"moments.cfl", [](RunConfig& c, const std::string& v) { c.cfl = to_double("moments.cfl", v); },
       [](const RunConfig& c) { return format_double(c.cfl); }},
      {"control.K", [](RunConfig& c, const std::string& v) { c.K = static_cast<int>(to_int("control.K", v)); },
       [](const RunConfig& c) { return std::to_string(c.K); }},
      {"control.wavenumber_unit",
       [](RunConfig& c, const std::string& v) { c.wavenumber_unit = to_double("control.wavenumber_unit", v); },
       [](const RunConfig& c) { return format_double(c.wavenumber_unit); }},
      {"time.T", [](RunConfig& c, const std::string& v) { c.T = to_double("time.T", v); },
       [](const RunConfig& c) { return format_double(c.T); }},
      {"time.T_extend", [](RunConfig& c, const std::string& v) { c.T_extend = to_double("time.T_extend", v); },
       [](const RunConfig& c) { return format_double(c.T_extend); }},
      {"kinetic.dt", [](RunConfig& c, const std::string& v) { c.kinetic_dt = to_double("kinetic.dt", v); },
       [](const RunConfig& c) { return format_double(c.kinetic_dt); }},
      {"output.stride",
       [](RunConfig& c, const std::string& v) {
         const long s = to_int("output.stride", v);
         if (s < 1) throw ConfigError("output.stride", "must be >= 1");
         c.stride = static_cast<std::size_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.stride); }},
      {"output.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir.string(); }},
      {"optimizer.eta0", [](RunConfig& c, const std::string& v) { c.optimizer.eta0 = to_double("optimizer.eta0", v); },
       [](const RunConfig& c) { return format_double(c.optimizer.eta0); }},
      {"optimizer.beta", [](RunConfig& c, const std::string& v) { c.optimizer.beta = to_double("optimizer.beta", v); },
       [](const RunConfig& c) { return format_double(c.optimizer.beta); }},
      {"optimizer.gamma", [](RunConfig& c, const std::string& v) { c.optimizer.gamma = to_double("optimizer.gamma", v); },
       [](const RunConfig& c) { return format_double(c.optimizer.gamma); }},
      {"optimizer.theta", [](RunConfig& c, const std::string& v) { c.optimizer.theta = to_double("optimizer.theta", v); },
       [](const RunConfig& c) { return format_double(c.optimizer.theta); }},
      {"optimizer.kappa",
       [](RunConfig& c, const std::string& v) { c.optimizer.kappa = v == "auto" ? -1.0 : to_double("optimizer.kappa", v); },
       [](const RunConfig& c) { return c.optimizer.kappa < 0.0 ? std::string("auto") : format_double(c.optimizer.kappa); }},
      {"optimizer.max_iter",
       [](RunConfig& c, const std::string& v) {
         const long n = to_int("optimizer.max_iter", v);
         if (n < 1) throw ConfigError("optimizer.max_iter", "must be >= 1");
         c.optimizer.max_iter = static_cast<std::size_t>(n);
       },
       [](const RunConfig& c) { return std::to_string(c.optimizer.max_iter); }},
      {"optimizer.grad_tol", [](RunConfig& c, const std::string& v) { c.optimizer.grad_tol = to_double("optimizer.grad_tol", v); },
       [](const RunConfig& c) { return format_double(c.optimizer.grad_tol); }},
      {"optimizer.gradient",
       [](RunConfig& c, const std::string& v) {
         if (v == "adjoint") {
           c.gradient = GradientMode::Adjoint;
         } else if (v == "exact") {
           c.gradient = GradientMode::Exact;
         } else {
           throw ConfigError("optimizer.gradient", "expected adjoint or exact, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.gradient == GradientMode::Adjoint ? "adjoint" : "exact"); }},
      {"optimizer.fd_step", [](RunConfig& c, const std::string& v) { c.fd_step = to_double("optimizer.fd_step", v); },
       [](const RunConfig& c) { return format_double(c.fd_step); }},
  };
  return table;
}

const Key& find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (k.name == name) return k;
  }
  throw ConfigError(name, "unknown configuration key");
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (value.empty()) throw ConfigError(key, "empty value");
  find_key(key).set(cfg, value);
  if (cfg.name.empty()) cfg.name = "custom";
}

}  // namespace

field::Grid1D RunConfig::grid() const {
  return field::Grid1D(length, nx, field::VelocityAxis{vmin, vmax, nv});
}

std::vector<std::string> preset_names() { return {"two-stream", "bump-on-tail"}; }

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.has_equilibrium = true;
  c.order = 30;
  c.K = 10;
  // Calibrated for the moment loss scale; 0.1 diverges on the first step.
  c.optimizer.eta0 = 1e-7;
  if (name == "two-stream") {
    c.equilibrium = hermite::Equilibrium::two_stream(2.4);
    c.perturbation.shape = kinetic::Perturbation::Shape::Cos;
    c.T = 30.0;
    c.T_extend = 40.0;
  } else if (name == "bump-on-tail") {
    c.equilibrium = hermite::Equilibrium::bump_on_tail(0.8, 0.2, 3.5, 0.5);
    c.perturbation.shape = kinetic::Perturbation::Shape::Sin;
    c.T = 25.0;
    c.T_extend = 60.0;
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "' (expected two-stream or bump-on-tail)");
  }
  c.perturbation.wavenumber = 0.2;
  c.perturbation.amplitude = 1e-3;
  return c;
}

void apply_text(RunConfig& cfg, const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    try {
      assign(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.key(), source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' is not key=value");
  assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& c) {
  std::vector<std::string> missing;
  if (!c.has_equilibrium) missing.emplace_back("equilibrium.kind");
  if (c.order < 0) missing.emplace_back("moments.order");
  if (c.K < 0) missing.emplace_back("control.K");
  if (c.T < 0.0) missing.emplace_back("time.T");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError(missing.front(), "missing required fields: " + list);
  }
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(c.order >= 1, "moments.order", "must be >= 1");
  require(c.K >= 0, "control.K", "must be >= 0");
  require(c.T > 0.0, "time.T", "must be positive");
  require(c.nx >= 4, "grid.nx", "must be >= 4");
  require(c.nv >= 2, "grid.nv", "must be >= 2");
  require(c.length > 0.0, "grid.length", "must be positive");
  require(c.vmax > c.vmin, "grid.vmax", "must exceed grid.vmin");
  require(c.cfl > 0.0, "moments.cfl", "must be positive");
  require(c.kinetic_dt > 0.0, "kinetic.dt", "must be positive");
  require(c.perturbation.amplitude >= 0.0, "perturbation.amplitude", "must be >= 0");
  require(c.wavenumber_unit > 0.0, "control.wavenumber_unit", "must be positive");
  require(c.fd_step > 0.0, "optimizer.fd_step", "must be positive");
  require(c.T_extend <= 0.0 || c.T_extend >= c.T, "time.T_extend", "must be >= time.T (or <= 0 to disable)");
  require(!c.rho_ion || *c.rho_ion > 0.0, "rho_ion", "must be positive or auto");
  const auto& e = c.equilibrium;
  require(e.vt > 0.0, "equilibrium.vt", "must be positive");
  if (e.kind == hermite::EquilibriumKind::BumpOnTail) {
    require(e.omega1 >= 0.0 && e.omega2 >= 0.0, "equilibrium.omega1", "weights must be non-negative");
    require(std::abs(e.omega1 + e.omega2 - 1.0) < 1e-12, "equilibrium.omega2", "omega1 + omega2 must equal 1");
  }
  try {
    c.optimizer.validate();
  } catch (const ArgumentError& err) {
    throw ConfigError("optimizer", err.what());
  }
}

RunConfig resolve(const std::optional<std::string>& preset_name, const std::optional<std::filesystem::path>& file,
                  const std::vector<std::string>& overrides) {
  RunConfig cfg = preset_name ? preset(*preset_name) : RunConfig{};
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("--config", "cannot read " + file->string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_text(cfg, ss.str(), file->string());
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  if (cfg.name.empty()) cfg.name = "custom";
  validate(cfg);
  return cfg;
}

std::string echo(const RunConfig& cfg) {
  std::string out = "# resolved configuration (" + cfg.name + ")\n";
  for (const auto& k : keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace vpmc::config
