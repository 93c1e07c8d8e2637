#pragma once

// Truncated Hermite moment system
//   dm/dt + A dm/dx + sqrt(N+1) d(mbar_{N+1})/dx e_N = (E_N + H) D m,
//   rho_N = (2 pi)^{1/4} m_0,
// advanced by Strang splitting: half-step semi-Lagrangian advection of the
// characteristic variables w = R^T m, a full explicit source step with the
// field solved from the mid state, and a second half-step advection.

#include <functional>
#include <span>
#include <vector>

#include "vpmc/field.hpp"

namespace vpmc::moments {

struct MomentSystem {
  int order = 0;                     // N
  std::vector<double> A;             // (N+1)^2 row-major, symmetric tridiagonal
  std::vector<double> D;             // (N+1)^2 row-major, subdiagonal sqrt(1..N)
  std::vector<double> R;             // eigenvectors as columns, R R^T = I
  std::vector<double> Rt;            // R^T
  std::vector<double> eigenvalues;   // ascending
  std::vector<double> closure_gradient;  // d(mbar_{N+1})/dx per node; empty means zero

  int size() const noexcept { return order + 1; }
  double max_speed() const;
};

// Throws ArgumentError for N < 1, NumericError if the eigensolve fails.
MomentSystem build_system(int N);

// m_n(x_j), row-major (N+1) x nx.
struct MomentField {
  int order = 0;
  int nx = 0;
  std::vector<double> values;
  double time = 0.0;

  MomentField() = default;
  MomentField(int order, int nx, double time = 0.0);

  std::span<double> row(int n);
  std::span<const double> row(int n) const;
  double& at(int n, int j) { return values[static_cast<std::size_t>(n) * nx + j]; }
  double at(int n, int j) const { return values[static_cast<std::size_t>(n) * nx + j]; }
  std::vector<double> density() const;  // (2 pi)^{1/4} m_0
};

// m_n(x_j, 0) = int f0(x_j, v) He~_n(v) dv on the grid's velocity axis.
MomentField project_initial(const std::function<double(double, double)>& f0, int N,
                            const field::Grid1D& grid);

// Same projection for sampled phase-space data, row-major nx x nv.
MomentField project_initial(std::span<const double> f_samples, int N, const field::Grid1D& grid);

// Everything the backward pass needs from one forward step.
struct StepRecord {
  double t_start = 0.0;
  double dt = 0.0;
  MomentField half;                  // state after the first half advection
  std::vector<double> field_total;   // E_N + H at the source step
};

struct MomentTrajectory {
  double dt_nominal = 0.0;
  std::vector<StepRecord> steps;
  std::vector<MomentField> states;   // levels t_0..t_n when requested
  MomentField final_state;
};

struct IntegrateOptions {
  double rho_ion = 1.0;
  bool keep_states = false;
  bool keep_steps = true;
  double neutrality_tol = 1e-6;
};

// Time step from the CFL rule max|lambda| dt / dx = cfl.
double cfl_time_step(const MomentSystem& sys, const field::Grid1D& grid, double cfl);

// Number of steps to reach T, the last one shortened.
std::size_t step_count(double T, double dt);

class MomentSolver {
 public:
  MomentSolver(const MomentSystem& sys, const field::Grid1D& grid, double rho_ion = 1.0,
               double neutrality_tol = 1e-6);

  // One Strang step in place. Throws NumericError(step_index) on non-finite output.
  StepRecord strang_step(MomentField& state, std::span<const double> H, double dt,
                         std::size_t step_index = 0);

  // Half-step advection m <- R shift(R^T m) with shifts lambda_k * dt / 2.
  // reverse = true traces characteristics backwards (transpose operator).
  void advect_half(MomentField& m, double dt, bool reverse);

  // m <- m + dt * c(x) D m, plus the closure flux.
  void apply_source(MomentField& m, std::span<const double> c, double dt) const;

  // E_N from the state's m_0.
  void field_of(const MomentField& m, std::span<double> E) const;

  MomentTrajectory integrate(const MomentField& initial, std::span<const double> H, double T,
                             double cfl, const IntegrateOptions& opts);

  const MomentSystem& system() const noexcept { return sys_; }
  const field::Grid1D& grid() const noexcept { return grid_; }

 private:
  MomentSystem sys_;
  field::Grid1D grid_;
  field::PoissonSolver poisson_;
  double rho_ion_;
  std::vector<double> w_;
  std::vector<double> shifted_;
};

// Free-function form.
MomentField strang_step(const MomentField& state, const MomentSystem& sys, const field::Grid1D& grid,
                        std::span<const double> H, double dt, double rho_ion = 1.0);

MomentTrajectory integrate(const MomentField& initial, const MomentSystem& sys,
                           const field::Grid1D& grid, std::span<const double> H, double T,
                           double cfl = 3.0, const IntegrateOptions& opts = {});

// Conserved total sum_j m_0(x_j) dx.
double total_mass(const MomentField& m, const field::Grid1D& grid);

}  // namespace vpmc::moments
