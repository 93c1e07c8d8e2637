#pragma once

// Diagnostics on the solver grids (rectangle rule throughout):
//   J(t)      = 1/2 ||f - mu||^2
//   E_energy  = 1/2 int E^2 dx
//   misfit    = 1/2 sum_n ||m_n - mbar_n||^2
// and the auxiliary reconstruction f_N = mu + sum_n (m_n - mbar_n) He~_n e^{-v^2/2}
// whose L2 distance to mu is bounded by the moment misfit.

#include <span>
#include <vector>

#include "vpmc/field.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"

namespace vpmc::diag {

struct TimeSeriesRecord {
  double t = 0.0;
  double J = 0.0;
  double E_energy = 0.0;
  double moment_misfit = 0.0;
};

// mbar_n on the grid's velocity axis.
std::vector<double> equilibrium_moments(const hermite::Equilibrium& mu, const field::Grid1D& grid, int N);

double kinetic_perturbation(const kinetic::PhaseSpaceField& state, const hermite::Equilibrium& mu);

double electric_energy(std::span<const double> E, const field::Grid1D& grid);

double moment_misfit(const moments::MomentField& m, std::span<const double> mbar, const field::Grid1D& grid);

// Requires a velocity axis on the grid.
kinetic::PhaseSpaceField reconstruct_fN(const moments::MomentField& m, const hermite::Equilibrium& mu,
                                        const field::Grid1D& grid);

struct BoundCheck {
  double lhs = 0.0;  // ||f_N - mu||^2 over x and v
  double rhs = 0.0;  // sum_n ||m_n - mbar_n||^2 over x
};

BoundCheck l2_bound_check(const moments::MomentField& m, const hermite::Equilibrium& mu,
                          const field::Grid1D& grid);

// One time-series sample of a kinetic run; the misfit uses the first N+1 moments of f.
TimeSeriesRecord record_kinetic(const kinetic::PhaseSpaceField& f, std::span<const double> E,
                                const hermite::Equilibrium& mu, std::span<const double> mbar);

// One sample of a moment run; J is evaluated on the reconstruction f_N.
TimeSeriesRecord record_moments(const moments::MomentField& m, std::span<const double> E,
                                const hermite::Equilibrium& mu, std::span<const double> mbar,
                                const field::Grid1D& grid);

}  // namespace vpmc::diag
