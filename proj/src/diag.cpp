#include "vpmc/diag.hpp"

#include <algorithm>
#include <cmath>

#include "vpmc/errors.hpp"
#include "vpmc/simd.hpp"

namespace vpmc::diag {

std::vector<double> equilibrium_moments(const hermite::Equilibrium& mu, const field::Grid1D& grid, int N) {
  const auto& axis = grid.v_axis();
  const auto quad = hermite::VelocityQuadrature::uniform(axis.vmin, axis.vmax, axis.nv);
  return hermite::equilibrium_moments(mu, quad, N);
}

double kinetic_perturbation(const kinetic::PhaseSpaceField& state, const hermite::Equilibrium& mu) {
  const auto& axis = state.grid.v_axis();
  const auto muv = mu.sample(axis.nodes());
  const auto nv = muv.size();
  double s = 0.0;
  for (int j = 0; j < state.nx(); ++j) {
    const double* row = state.values.data() + static_cast<std::size_t>(j) * nv;
    for (std::size_t l = 0; l < nv; ++l) {
      const double d = row[l] - muv[l];
      s += d * d;
    }
  }
  return 0.5 * s * state.grid.dx() * axis.dv();
}

double electric_energy(std::span<const double> E, const field::Grid1D& grid) {
  if (E.size() != static_cast<std::size_t>(grid.nx)) throw ArgumentError("electric_energy: field has wrong length");
  return 0.5 * simd::active().dot(E.data(), E.data(), E.size()) * grid.dx();
}

double moment_misfit(const moments::MomentField& m, std::span<const double> mbar, const field::Grid1D& grid) {
  if (mbar.size() < static_cast<std::size_t>(m.order + 1)) throw ArgumentError("moment_misfit: mbar too short");
  const auto& k = simd::active();
  double s = 0.0;
  for (int n = 0; n <= m.order; ++n) {
    s += k.sum_sq_dev(m.row(n).data(), mbar[static_cast<std::size_t>(n)], static_cast<std::size_t>(m.nx));
  }
  return 0.5 * s * grid.dx();
}

kinetic::PhaseSpaceField reconstruct_fN(const moments::MomentField& m, const hermite::Equilibrium& mu,
                                        const field::Grid1D& grid) {
  if (m.nx != grid.nx) throw ArgumentError("reconstruct_fN: moment field does not match the grid");
  const auto& axis = grid.v_axis();
  const auto nodes = axis.nodes();
  const auto nv = nodes.size();
  const auto mbar = equilibrium_moments(mu, grid, m.order);
  const auto muv = mu.sample(nodes);
  // Hf_n(v_l) = He~_n(v_l) exp(-v_l^2 / 2)
  auto basis = hermite::htilde_table(nodes, m.order);
  for (int n = 0; n <= m.order; ++n) {
    for (std::size_t l = 0; l < nv; ++l) basis[static_cast<std::size_t>(n) * nv + l] *= std::exp(-0.5 * nodes[l] * nodes[l]);
  }
  kinetic::PhaseSpaceField f(grid, m.time);
  const auto& k = simd::active();
  for (int j = 0; j < grid.nx; ++j) {
    double* row = f.values.data() + static_cast<std::size_t>(j) * nv;
    std::copy(muv.begin(), muv.end(), row);
    for (int n = 0; n <= m.order; ++n) {
      const double c = m.at(n, j) - mbar[static_cast<std::size_t>(n)];
      if (c != 0.0) k.axpy(c, basis.data() + static_cast<std::size_t>(n) * nv, row, nv);
    }
  }
  return f;
}

BoundCheck l2_bound_check(const moments::MomentField& m, const hermite::Equilibrium& mu,
                          const field::Grid1D& grid) {
  BoundCheck b;
  b.lhs = 2.0 * kinetic_perturbation(reconstruct_fN(m, mu, grid), mu);
  b.rhs = 2.0 * moment_misfit(m, equilibrium_moments(mu, grid, m.order), grid);
  return b;
}

TimeSeriesRecord record_kinetic(const kinetic::PhaseSpaceField& f, std::span<const double> E,
                                const hermite::Equilibrium& mu, std::span<const double> mbar) {
  TimeSeriesRecord r;
  r.t = f.time;
  r.J = kinetic_perturbation(f, mu);
  r.E_energy = electric_energy(E, f.grid);
  if (!mbar.empty()) {
    const int N = static_cast<int>(mbar.size()) - 1;
    r.moment_misfit = moment_misfit(kinetic::moments_of(f, N), mbar, f.grid);
  }
  return r;
}

TimeSeriesRecord record_moments(const moments::MomentField& m, std::span<const double> E,
                                const hermite::Equilibrium& mu, std::span<const double> mbar,
                                const field::Grid1D& grid) {
  TimeSeriesRecord r;
  r.t = m.time;
  r.J = kinetic_perturbation(reconstruct_fN(m, mu, grid), mu);
  r.E_energy = electric_energy(E, grid);
  r.moment_misfit = moment_misfit(m, mbar, grid);
  return r;
}

}  // namespace vpmc::diag
