#include "vpmc/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpmc/errors.hpp"
#include "vpmc/parallel.hpp"
#include "vpmc/simd.hpp"

namespace vpmc::kinetic {

namespace {

// Below this many samples per worker, thread start-up costs more than it saves.
constexpr std::size_t kMinWorkPerThread = 1 << 16;

void transpose(const double* in, std::size_t rows, std::size_t cols, double* out) {
  constexpr std::size_t B = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += B) {
    const std::size_t r1 = std::min(rows, r0 + B);
    for (std::size_t c0 = 0; c0 < cols; c0 += B) {
      const std::size_t c1 = std::min(cols, c0 + B);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) out[c * rows + r] = in[r * cols + c];
      }
    }
  }
}

}  // namespace

PhaseSpaceField::PhaseSpaceField(const field::Grid1D& g, double t)
    : grid(g), values(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.v_axis().nv), 0.0), time(t) {}

std::vector<double> PhaseSpaceField::density() const {
  const auto nvv = static_cast<std::size_t>(nv());
  const double dv = grid.v_axis().dv();
  std::vector<double> rho(static_cast<std::size_t>(grid.nx));
  for (std::size_t j = 0; j < rho.size(); ++j) {
    double s = 0.0;
    const double* row = values.data() + j * nvv;
    for (std::size_t l = 0; l < nvv; ++l) s += row[l];
    rho[j] = s * dv;
  }
  return rho;
}

double Perturbation::operator()(double x) const {
  const double arg = wavenumber * x;
  return 1.0 + amplitude * (shape == Shape::Cos ? std::cos(arg) : std::sin(arg));
}

std::function<double(double, double)> initial_distribution(const hermite::Equilibrium& mu,
                                                           const Perturbation& p) {
  return [mu, p](double x, double v) { return p(x) * mu(v); };
}

PhaseSpaceField sample(const std::function<double(double, double)>& f, const field::Grid1D& grid,
                       double time) {
  PhaseSpaceField s(grid, time);
  const auto& axis = grid.v_axis();
  for (int j = 0; j < grid.nx; ++j) {
    const double x = grid.x(j);
    for (int l = 0; l < axis.nv; ++l) s.at(j, l) = f(x, axis.v(l));
  }
  return s;
}

KineticSolver::KineticSolver(const field::Grid1D& grid, double rho_ion, double neutrality_tol)
    : grid_(grid), poisson_(grid, neutrality_tol), rho_ion_(rho_ion) {
  const auto n = static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.v_axis().nv);
  a_.resize(n);
  b_.resize(n);
}

void KineticSolver::advect_x_half(PhaseSpaceField& state, double dt) {
  const auto nx = static_cast<std::size_t>(grid_.nx);
  const auto& axis = grid_.v_axis();
  const auto nv = static_cast<std::size_t>(axis.nv);
  transpose(state.values.data(), nx, nv, a_.data());
  const double scale = 0.5 * dt / grid_.dx();
  const auto& k = simd::active();
  parallel_for(
      nv,
      [&](std::size_t l) {
        simd::shift_periodic({a_.data() + l * nx, nx}, {b_.data() + l * nx, nx},
                             axis.v(static_cast<int>(l)) * scale, k);
      },
      std::max<std::size_t>(1, kMinWorkPerThread / nx));
  transpose(b_.data(), nv, nx, state.values.data());
}

void KineticSolver::advect_v(PhaseSpaceField& state, std::span<const double> accel, double dt) {
  const auto nx = static_cast<std::size_t>(grid_.nx);
  const auto nv = static_cast<std::size_t>(grid_.v_axis().nv);
  const double scale = dt / grid_.v_axis().dv();
  const auto& k = simd::active();
  std::copy(state.values.begin(), state.values.end(), a_.begin());
  parallel_for(
      nx,
      [&](std::size_t j) {
        simd::shift_clamped({a_.data() + j * nv, nv}, {state.values.data() + j * nv, nv},
                            accel[j] * scale, k);
      },
      std::max<std::size_t>(1, kMinWorkPerThread / nv));
}

std::vector<double> KineticSolver::field_of(const PhaseSpaceField& state) const {
  std::vector<double> E(static_cast<std::size_t>(grid_.nx));
  poisson_.field(state.density(), rho_ion_, E);
  return E;
}

std::vector<double> KineticSolver::step(PhaseSpaceField& state, std::span<const double> H, double dt,
                                        std::size_t step_index) {
  if (!(dt > 0.0)) throw ArgumentError("vp_step: dt must be positive");
  if (H.size() != static_cast<std::size_t>(grid_.nx)) throw ArgumentError("vp_step: control has wrong length");
  if (state.values.size() != a_.size()) throw ArgumentError("vp_step: state shape mismatch");

  advect_x_half(state, dt);
  std::vector<double> E;
  try {
    E = field_of(state);
  } catch (const ModelError& e) {
    throw NumericError("kinetic solver lost charge neutrality at step " + std::to_string(step_index) + ": " +
                           e.what(),
                       step_index);
  }
  std::vector<double> accel(E.size());
  for (std::size_t j = 0; j < E.size(); ++j) {
    accel[j] = E[j] + H[j];
    if (!std::isfinite(accel[j])) {
      throw NumericError("kinetic solver blew up at step " + std::to_string(step_index), step_index);
    }
  }
  advect_v(state, accel, dt);
  advect_x_half(state, dt);
  state.time += dt;

  for (double f : state.values) {
    if (!std::isfinite(f)) {
      throw NumericError("kinetic solver blew up at step " + std::to_string(step_index), step_index);
    }
  }
  return E;
}

PhaseSpaceField KineticSolver::integrate(const PhaseSpaceField& initial, std::span<const double> H,
                                         double T, double dt, const Observer& observer) {
  PhaseSpaceField state = initial;
  (void)field_of(state);  // rejects a non-neutral initial state
  if (observer) observer(state, 0);
  const std::size_t n = moments::step_count(T, dt);
  const double t_end = initial.time + T;
  for (std::size_t s = 0; s < n; ++s) {
    const double h = (s + 1 == n) ? t_end - state.time : dt;
    step(state, H, h, s);
    if (s + 1 == n) state.time = t_end;
    if (observer) observer(state, s + 1);
  }
  return state;
}

PhaseSpaceField vp_step(const PhaseSpaceField& state, std::span<const double> H, double dt,
                        double rho_ion) {
  KineticSolver solver(state.grid, rho_ion);
  PhaseSpaceField out = state;
  solver.step(out, H, dt);
  return out;
}

moments::MomentField moments_of(const PhaseSpaceField& state, int N) {
  auto m = moments::project_initial(state.values, N, state.grid);
  m.time = state.time;
  return m;
}

double total_mass(const PhaseSpaceField& state) {
  double s = 0.0;
  for (double f : state.values) s += f;
  return s * state.grid.dx() * state.grid.v_axis().dv();
}

}  // namespace vpmc::kinetic
