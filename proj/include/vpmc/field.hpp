#pragma once

#include <optional>
#include <span>
#include <vector>

namespace vpmc::field {

// Cell-centred uniform velocity axis: v_l = vmin + (l + 1/2) dv.
struct VelocityAxis {
  double vmin = -8.0;
  double vmax = 8.0;
  int nv = 200;

  double dv() const noexcept { return (vmax - vmin) / nv; }
  double v(int l) const noexcept { return vmin + (l + 0.5) * dv(); }
  std::vector<double> nodes() const;
};

// Periodic spatial grid x_j = j dx on [0, length), plus an optional velocity axis.
struct Grid1D {
  double length = 0.0;
  int nx = 0;
  std::optional<VelocityAxis> velocity;

  Grid1D() = default;
  // Throws ArgumentError unless nx >= 4 and length > 0.
  Grid1D(double length, int nx, std::optional<VelocityAxis> velocity = std::nullopt);

  double dx() const noexcept { return length / nx; }
  double x(int j) const noexcept { return j * dx(); }
  std::vector<double> nodes() const;
  const VelocityAxis& v_axis() const;  // throws if absent
};

struct FieldState {
  std::vector<double> E;
  std::vector<double> phi;
  std::vector<double> rho;
  double rho_ion = 1.0;
};

enum class PoissonMethod { Spectral, Trapezoid };

// Default neutrality tolerance of solve_poisson, relative to max|rho|.
inline constexpr double kNeutralityTolerance = 1e-8;

// Solves dE/dx = rho - rho_ion, E = -dphi/dx on the periodic grid with the
// zero-mean gauge (int E dx = 0, phi(0) = phi(L) = 0).
// Throws ModelError if |mean(rho - rho_ion)| > tol * max|rho|.
FieldState solve_poisson(std::span<const double> rho, double rho_ion, const Grid1D& grid,
                         PoissonMethod method = PoissonMethod::Spectral,
                         double neutrality_tol = kNeutralityTolerance);

// Spectral solver with the discrete Fourier integration folded into dense
// circulant operators, for repeated solves on one grid.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid1D& grid, double neutrality_tol = kNeutralityTolerance);

  // E only; rho_ion subtracted before the neutrality check.
  void field(std::span<const double> rho, double rho_ion, std::span<double> E) const;
  FieldState solve(std::span<const double> rho, double rho_ion) const;

  const Grid1D& grid() const noexcept { return grid_; }

 private:
  void check_neutral(std::span<const double> rho, double rho_ion) const;

  Grid1D grid_;
  double tol_;
  std::vector<double> to_field_;      // nx x nx
  std::vector<double> to_potential_;  // nx x nx
};

// Static control field H(x) = sum_{k=1}^K alpha_k sin(k c x) + sum_{k=0}^K beta_k cos(k c x),
// with c = wavenumber_unit (1/5 for the 10 pi domain).
struct ControlParams {
  int K = 0;
  std::vector<double> alpha;  // K entries, alpha_1..alpha_K
  std::vector<double> beta;   // K + 1 entries, beta_0..beta_K
  double wavenumber_unit = 0.2;

  static ControlParams zeros(int K, double wavenumber_unit = 0.2);
  std::size_t size() const noexcept { return alpha.size() + beta.size(); }

  // alpha then beta
  std::vector<double> flatten() const;
  static ControlParams from_flat(std::span<const double> flat, int K, double wavenumber_unit = 0.2);
};

enum class Parity { Sin, Cos };

std::vector<double> eval_control(const ControlParams& params, std::span<const double> x);

// One basis column; throws ArgumentError for k outside [1, K] (sin) / [0, K] (cos)
// when K >= 0 is given.
std::vector<double> basis_function(int k, Parity parity, std::span<const double> x,
                                   double wavenumber_unit = 0.2, int K = -1);

// Columns in flattened parameter order (alpha_1..alpha_K, beta_0..beta_K),
// row-major (2K + 1) x x.size().
std::vector<double> basis_matrix(int K, std::span<const double> x, double wavenumber_unit = 0.2);

}  // namespace vpmc::field
