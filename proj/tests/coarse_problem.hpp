#pragma once

// Small control problem shared by the gradient tests and the acceptance binary:
// N = 3, Nx = 16, K = 3, two-stream initial data, exactly five steps of length dt.

#include <cmath>
#include <numbers>

#include "vpmc/adjoint.hpp"
#include "vpmc/diag.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"

namespace vpmc::testing {

inline adjoint::ControlProblem coarse_problem(double dt) {
  adjoint::ControlProblem p;
  p.sys = moments::build_system(3);
  p.grid = field::Grid1D(10.0 * std::numbers::pi, 16, field::VelocityAxis{});
  const auto mu = hermite::Equilibrium::two_stream(2.4);
  p.initial = moments::project_initial(kinetic::initial_distribution(mu, {}), 3, p.grid);
  p.mbar = diag::equilibrium_moments(mu, p.grid, 3);
  p.cfl = dt * p.sys.max_speed() / p.grid.dx();
  // slightly under five nominal steps so rounding in the step count cannot add a sixth
  p.T = 5.0 * dt * (1.0 - 1e-12);
  p.rho_ion = 1.0;
  p.K = 3;
  return p;
}

// Step length of CFL number 3 on this grid.
inline double coarse_cfl3_dt() {
  const auto sys = moments::build_system(3);
  return 3.0 * (10.0 * std::numbers::pi / 16) / sys.max_speed();
}

}  // namespace vpmc::testing
