#pragma once

// Run configuration: flat `key = value` text, `#` comments, dotted section keys.
// Sources are layered preset -> file -> overrides; later ones win.

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vpmc/field.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/optim.hpp"

namespace vpmc::config {

enum class GradientMode { Adjoint, Exact };

struct RunConfig {
  std::string name;  // preset name or "custom"

  hermite::Equilibrium equilibrium;
  bool has_equilibrium = false;

  double length = 10.0 * std::numbers::pi;
  int nx = 100;
  double vmin = -8.0;
  double vmax = 8.0;
  int nv = 200;

  kinetic::Perturbation perturbation;
  std::optional<double> rho_ion = 1.0;  // nullopt means "auto" (mean initial density)

  int order = -1;       // moment order N
  double cfl = 3.0;
  int K = -1;           // control modes
  double wavenumber_unit = 0.2;
  double T = -1.0;
  double T_extend = -1.0;  // <= 0 means no extension
  double kinetic_dt = 0.1;
  std::size_t stride = 1;  // diagnostics every stride steps

  optim::Hyperparameters optimizer;
  GradientMode gradient = GradientMode::Adjoint;
  double fd_step = 1e-5;

  std::filesystem::path out_dir = "out";

  field::Grid1D grid() const;
};

// Built-in scenarios: "two-stream", "bump-on-tail". Throws ConfigError otherwise.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Applies `key = value` lines. Throws ConfigError naming the key for unknown
// keys and bad values, with the line number in the message.
void apply_text(RunConfig& cfg, const std::string& text, const std::string& source = "<config>");
// Applies one `key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Throws ConfigError listing every missing required field, or naming the first
// out-of-range value.
void validate(const RunConfig& cfg);

// preset (optional) -> file (optional) -> overrides, then validate.
RunConfig resolve(const std::optional<std::string>& preset_name,
                  const std::optional<std::filesystem::path>& file,
                  const std::vector<std::string>& overrides);

// Every resolved key as `key = value`, re-parseable by apply_text.
std::string echo(const RunConfig& cfg);

}  // namespace vpmc::config
