#include "vpmc/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vpmc/errors.hpp"
#include "vpmc/simd.hpp"

namespace vpmc::field {

std::vector<double> VelocityAxis::nodes() const {
  std::vector<double> v(static_cast<std::size_t>(nv));
  for (int l = 0; l < nv; ++l) v[static_cast<std::size_t>(l)] = this->v(l);
  return v;
}

Grid1D::Grid1D(double length_, int nx_, std::optional<VelocityAxis> velocity_)
    : length(length_), nx(nx_), velocity(velocity_) {
  if (nx < 4) throw ArgumentError("Grid1D: nx must be >= 4, got " + std::to_string(nx));
  if (!(length > 0.0)) throw ArgumentError("Grid1D: length must be positive");
  if (velocity && (velocity->nv < 2 || !(velocity->vmax > velocity->vmin))) {
    throw ArgumentError("Grid1D: velocity axis needs nv >= 2 and vmax > vmin");
  }
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(nx));
  for (int j = 0; j < nx; ++j) x[static_cast<std::size_t>(j)] = this->x(j);
  return x;
}

const VelocityAxis& Grid1D::v_axis() const {
  if (!velocity) throw ArgumentError("Grid1D: no velocity axis configured");
  return *velocity;
}

namespace {

void check_neutrality(std::span<const double> rho, double rho_ion, double tol) {
  double mean = 0.0;
  double peak = 0.0;
  for (double r : rho) {
    mean += r - rho_ion;
    peak = std::max(peak, std::abs(r));
  }
  mean /= static_cast<double>(rho.size());
  if (std::abs(mean) > tol * std::max(peak, 1e-300)) {
    throw ModelError("plasma not neutral: mean(rho - rho_ion) = " + std::to_string(mean) +
                     " exceeds " + std::to_string(tol) + " * max|rho|");
  }
}

int highest_mode(int nx) { return (nx % 2 == 0) ? nx / 2 - 1 : (nx - 1) / 2; }

}  // namespace

namespace {

std::vector<double> fluctuation(std::span<const double> rho) {
  std::vector<double> d(rho.begin(), rho.end());
  const double ref = rho.empty() ? 0.0 : rho[0];
  for (double& x : d) x -= ref;
  return d;
}

}  // namespace

PoissonSolver::PoissonSolver(const Grid1D& grid, double neutrality_tol)
    : grid_(grid), tol_(neutrality_tol) {
  const int n = grid.nx;
  const auto un = static_cast<std::size_t>(n);
  to_field_.assign(un * un, 0.0);
  to_potential_.assign(un * un, 0.0);
  const double base = 2.0 * std::numbers::pi / grid.length;
  const int kmax = highest_mode(n);
  // Circulant kernels in terms of the node separation d = j - i.
  std::vector<double> ker_e(un, 0.0), ker_p(un, 0.0);
  for (int d = 0; d < n; ++d) {
    double se = 0.0, sp = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      const double kappa = base * k;
      const double arg = 2.0 * std::numbers::pi * k * d / n;
      se += std::sin(arg) / kappa;
      sp += std::cos(arg) / (kappa * kappa);
    }
    ker_e[static_cast<std::size_t>(d)] = 2.0 * se / n;
    ker_p[static_cast<std::size_t>(d)] = 2.0 * sp / n;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto d = static_cast<std::size_t>(((j - i) % n + n) % n);
      to_field_[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = ker_e[d];
      to_potential_[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = ker_p[d];
    }
  }
}

void PoissonSolver::check_neutral(std::span<const double> rho, double rho_ion) const {
  if (rho.size() != static_cast<std::size_t>(grid_.nx)) {
    throw ArgumentError("PoissonSolver: density has wrong length");
  }
  check_neutrality(rho, rho_ion, tol_);
}

void PoissonSolver::field(std::span<const double> rho, double rho_ion, std::span<double> E) const {
  check_neutral(rho, rho_ion);
  const auto n = static_cast<std::size_t>(grid_.nx);
  // The kernels annihilate constants, so rho_ion drops out; subtracting rho[0]
  // as well makes E exactly zero for homogeneous densities.
  const auto& k = simd::active();
  const auto d = fluctuation(rho);
  for (std::size_t j = 0; j < n; ++j) E[j] = k.dot(to_field_.data() + j * n, d.data(), n);
}

FieldState PoissonSolver::solve(std::span<const double> rho, double rho_ion) const {
  check_neutral(rho, rho_ion);
  const auto n = static_cast<std::size_t>(grid_.nx);
  FieldState s;
  s.rho.assign(rho.begin(), rho.end());
  s.rho_ion = rho_ion;
  s.E.resize(n);
  s.phi.resize(n);
  const auto& k = simd::active();
  const auto d = fluctuation(rho);
  for (std::size_t j = 0; j < n; ++j) {
    s.E[j] = k.dot(to_field_.data() + j * n, d.data(), n);
    s.phi[j] = k.dot(to_potential_.data() + j * n, d.data(), n);
  }
  const double anchor = s.phi[0];
  for (double& p : s.phi) p -= anchor;
  return s;
}

FieldState solve_poisson(std::span<const double> rho, double rho_ion, const Grid1D& grid,
                         PoissonMethod method, double neutrality_tol) {
  if (method == PoissonMethod::Spectral) return PoissonSolver(grid, neutrality_tol).solve(rho, rho_ion);

  if (rho.size() != static_cast<std::size_t>(grid.nx)) throw ArgumentError("solve_poisson: density has wrong length");
  check_neutrality(rho, rho_ion, neutrality_tol);
  const std::size_t n = rho.size();
  const double dx = grid.dx();
  FieldState s;
  s.rho.assign(rho.begin(), rho.end());
  s.rho_ion = rho_ion;
  s.E.assign(n, 0.0);
  s.phi.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    s.E[j + 1] = s.E[j] + 0.5 * dx * ((rho[j] - rho_ion) + (rho[j + 1] - rho_ion));
  }
  double mean = 0.0;
  for (double e : s.E) mean += e;
  mean /= static_cast<double>(n);
  for (double& e : s.E) e -= mean;
  for (std::size_t j = 0; j + 1 < n; ++j) s.phi[j + 1] = s.phi[j] - 0.5 * dx * (s.E[j] + s.E[j + 1]);
  return s;
}

ControlParams ControlParams::zeros(int K, double wavenumber_unit) {
  if (K < 0) throw ArgumentError("ControlParams: K must be >= 0");
  ControlParams p;
  p.K = K;
  p.alpha.assign(static_cast<std::size_t>(K), 0.0);
  p.beta.assign(static_cast<std::size_t>(K) + 1, 0.0);
  p.wavenumber_unit = wavenumber_unit;
  return p;
}

std::vector<double> ControlParams::flatten() const {
  std::vector<double> out(alpha);
  out.insert(out.end(), beta.begin(), beta.end());
  return out;
}

ControlParams ControlParams::from_flat(std::span<const double> flat, int K, double wavenumber_unit) {
  if (K < 0 || flat.size() != static_cast<std::size_t>(2 * K + 1)) {
    throw ArgumentError("ControlParams::from_flat: expected " + std::to_string(2 * K + 1) + " values");
  }
  ControlParams p;
  p.K = K;
  p.wavenumber_unit = wavenumber_unit;
  p.alpha.assign(flat.begin(), flat.begin() + K);
  p.beta.assign(flat.begin() + K, flat.end());
  return p;
}

std::vector<double> eval_control(const ControlParams& params, std::span<const double> x) {
  std::vector<double> h(x.size(), 0.0);
  const double c = params.wavenumber_unit;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= params.alpha.size(); ++k) acc += params.alpha[k - 1] * std::sin(k * c * x[j]);
    for (std::size_t k = 0; k < params.beta.size(); ++k) acc += params.beta[k] * std::cos(k * c * x[j]);
    h[j] = acc;
  }
  return h;
}

std::vector<double> basis_function(int k, Parity parity, std::span<const double> x,
                                   double wavenumber_unit, int K) {
  const int lo = parity == Parity::Sin ? 1 : 0;
  if (k < lo || (K >= 0 && k > K)) {
    throw ArgumentError("basis_function: mode index " + std::to_string(k) + " out of range");
  }
  std::vector<double> col(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double arg = k * wavenumber_unit * x[j];
    col[j] = parity == Parity::Sin ? std::sin(arg) : std::cos(arg);
  }
  return col;
}

std::vector<double> basis_matrix(int K, std::span<const double> x, double wavenumber_unit) {
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(2 * K + 1) * x.size());
  for (int k = 1; k <= K; ++k) {
    const auto col = basis_function(k, Parity::Sin, x, wavenumber_unit, K);
    m.insert(m.end(), col.begin(), col.end());
  }
  for (int k = 0; k <= K; ++k) {
    const auto col = basis_function(k, Parity::Cos, x, wavenumber_unit, K);
    m.insert(m.end(), col.begin(), col.end());
  }
  return m;
}

}  // namespace vpmc::field
