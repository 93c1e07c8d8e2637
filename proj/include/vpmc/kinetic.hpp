#pragma once

// Reference Vlasov-Poisson solver
//   f_t + v f_x + (E + H) f_v = 0,  E_x = rho - rho_ion,  rho = int f dv
// by Strang splitting with semi-Lagrangian linear interpolation: half x-advection,
// Poisson solve, full v-advection (zero inflow at the velocity bounds), half
// x-advection.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vpmc/field.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/moment_solver.hpp"

namespace vpmc::kinetic {

// f(x_j, v_l) stored x-major: values[j * nv + l].
struct PhaseSpaceField {
  field::Grid1D grid;
  std::vector<double> values;
  double time = 0.0;

  PhaseSpaceField() = default;
  explicit PhaseSpaceField(const field::Grid1D& grid, double time = 0.0);

  int nx() const noexcept { return grid.nx; }
  int nv() const { return grid.v_axis().nv; }
  double& at(int j, int l) { return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(nv()) + l]; }
  double at(int j, int l) const { return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(nv()) + l]; }
  std::vector<double> density() const;  // sum_l f dv
};

// Spatial modulation 1 + amplitude * {cos, sin}(wavenumber x).
struct Perturbation {
  enum class Shape { Cos, Sin };
  Shape shape = Shape::Cos;
  double wavenumber = 0.2;
  double amplitude = 1e-3;

  double operator()(double x) const;
};

// f0(x, v) = perturbation(x) * mu(v)
std::function<double(double, double)> initial_distribution(const hermite::Equilibrium& mu,
                                                           const Perturbation& p);

PhaseSpaceField sample(const std::function<double(double, double)>& f, const field::Grid1D& grid,
                       double time = 0.0);

class KineticSolver {
 public:
  KineticSolver(const field::Grid1D& grid, double rho_ion = 1.0, double neutrality_tol = 1e-6);

  // One Strang step in place; returns E at the mid state. Throws NumericError on
  // non-finite output.
  std::vector<double> step(PhaseSpaceField& state, std::span<const double> H, double dt,
                           std::size_t step_index = 0);

  // Self-consistent E of the state.
  std::vector<double> field_of(const PhaseSpaceField& state) const;

  // Advances to initial.time + T with steps of dt (last one shortened).
  // observer(state, step) is called for the initial state (step 0) and after
  // every step.
  using Observer = std::function<void(const PhaseSpaceField&, std::size_t)>;
  PhaseSpaceField integrate(const PhaseSpaceField& initial, std::span<const double> H, double T,
                            double dt, const Observer& observer = {});

  const field::Grid1D& grid() const noexcept { return grid_; }
  double rho_ion() const noexcept { return rho_ion_; }

 private:
  void advect_x_half(PhaseSpaceField& state, double dt);
  void advect_v(PhaseSpaceField& state, std::span<const double> accel, double dt);

  field::Grid1D grid_;
  field::PoissonSolver poisson_;
  double rho_ion_;
  std::vector<double> a_;
  std::vector<double> b_;
};

PhaseSpaceField vp_step(const PhaseSpaceField& state, std::span<const double> H, double dt,
                        double rho_ion = 1.0);

// m_n(x_j) by the velocity-grid quadrature.
moments::MomentField moments_of(const PhaseSpaceField& state, int N);

// sum_{j,l} f dx dv
double total_mass(const PhaseSpaceField& state);

}  // namespace vpmc::kinetic
