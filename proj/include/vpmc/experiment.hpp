#pragma once

// Orchestration behind the command-line tool: each run_* writes its artifacts
// into cfg.out_dir and returns a summary.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vpmc/adjoint.hpp"
#include "vpmc/config.hpp"
#include "vpmc/diag.hpp"
#include "vpmc/field.hpp"
#include "vpmc/optim.hpp"

namespace vpmc::experiment {

struct Setup {
  field::Grid1D grid;
  hermite::Equilibrium mu;
  kinetic::PhaseSpaceField f0;
  double rho_ion = 1.0;
  std::vector<double> mbar;  // order + 1 equilibrium moments
};

// Resolves rho_ion = auto to the mean initial density.
Setup make_setup(const config::RunConfig& cfg);

adjoint::ControlProblem make_problem(const config::RunConfig& cfg, const Setup& setup);

struct KineticSummary {
  std::vector<diag::TimeSeriesRecord> series;
  diag::TimeSeriesRecord at_T;
  std::optional<diag::TimeSeriesRecord> at_extend;
};

// Kinetic run with a fixed control up to max(T, T_extend). Records diagnostics
// every cfg.stride steps and always at 0, T and T_extend. When write is set,
// stores timeseries.csv, phase-space snapshots (CSV and VPKIN1) and the H profile.
KineticSummary run_kinetic(const config::RunConfig& cfg, const field::ControlParams& params, bool write = true);

struct MomentSummary {
  std::vector<diag::TimeSeriesRecord> series;
  double loss = 0.0;
};

MomentSummary run_moments(const config::RunConfig& cfg, const field::ControlParams& params, bool write = true);

struct OptimizeSummary {
  optim::OptimResult result;
  field::ControlParams params;
  int exit_code = 0;  // 0 converged, 2 max iterations, 1 numeric abort
};

// Optimizes H against the moment system and writes params.txt, run_log.csv,
// run_summary.txt, H.csv and the controlled moment diagnostics.
OptimizeSummary run_optimize(const config::RunConfig& cfg, bool write = true, bool verbose = false);

// Every output run_* writes also gets the resolved configuration echo.
void write_resolved_config(const config::RunConfig& cfg);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast property suite: Hermite identities, eigenvalue/root agreement, mass
// conservation, fixed points, L2 bound, optimizer identities.
std::vector<Check> property_suite();

}  // namespace vpmc::experiment
