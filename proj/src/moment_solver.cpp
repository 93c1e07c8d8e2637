#include "vpmc/moment_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vpmc/errors.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/simd.hpp"
#include "vpmc/tridiag.hpp"

namespace vpmc::moments {

namespace {

const double kDensityScale = std::pow(2.0 * std::numbers::pi, 0.25);

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

double MomentSystem::max_speed() const {
  double s = 0.0;
  for (double l : eigenvalues) s = std::max(s, std::abs(l));
  return s;
}

MomentSystem build_system(int N) {
  if (N < 1) throw ArgumentError("build_system: truncation order must be >= 1");
  const auto n = static_cast<std::size_t>(N) + 1;
  MomentSystem sys;
  sys.order = N;
  sys.A.assign(n * n, 0.0);
  sys.D.assign(n * n, 0.0);
  std::vector<double> diag(n, 0.0), off(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double s = std::sqrt(static_cast<double>(i));
    sys.A[(i - 1) * n + i] = s;
    sys.A[i * n + (i - 1)] = s;
    sys.D[i * n + (i - 1)] = s;
    off[i - 1] = s;
  }
  auto eig = symmetric_tridiagonal_eigen(diag, off);
  sys.eigenvalues = std::move(eig.values);
  sys.R = std::move(eig.vectors);
  sys.Rt.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) sys.Rt[k * n + i] = sys.R[i * n + k];
  }
  return sys;
}

MomentField::MomentField(int order_, int nx_, double time_)
    : order(order_), nx(nx_), values(static_cast<std::size_t>(order_ + 1) * static_cast<std::size_t>(nx_), 0.0),
      time(time_) {}

std::span<double> MomentField::row(int n) {
  return {values.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(nx), static_cast<std::size_t>(nx)};
}

std::span<const double> MomentField::row(int n) const {
  return {values.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(nx), static_cast<std::size_t>(nx)};
}

std::vector<double> MomentField::density() const {
  std::vector<double> rho(row(0).begin(), row(0).end());
  for (double& r : rho) r *= kDensityScale;
  return rho;
}

MomentField project_initial(const std::function<double(double, double)>& f0, int N,
                            const field::Grid1D& grid) {
  const auto& axis = grid.v_axis();
  const auto nodes = axis.nodes();
  std::vector<double> samples(static_cast<std::size_t>(grid.nx) * nodes.size());
  for (int j = 0; j < grid.nx; ++j) {
    const double x = grid.x(j);
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      samples[static_cast<std::size_t>(j) * nodes.size() + l] = f0(x, nodes[l]);
    }
  }
  return project_initial(samples, N, grid);
}

MomentField project_initial(std::span<const double> f_samples, int N, const field::Grid1D& grid) {
  const auto& axis = grid.v_axis();
  const auto nv = static_cast<std::size_t>(axis.nv);
  const auto nx = static_cast<std::size_t>(grid.nx);
  if (f_samples.size() != nx * nv) throw ArgumentError("project_initial: sample array has wrong size");
  const auto table = hermite::htilde_table(axis.nodes(), N);
  const double dv = axis.dv();
  MomentField m(N, grid.nx, 0.0);
  const auto& k = simd::active();
  for (int n = 0; n <= N; ++n) {
    const double* hn = table.data() + static_cast<std::size_t>(n) * nv;
    for (std::size_t j = 0; j < nx; ++j) {
      m.at(n, static_cast<int>(j)) = dv * k.dot(hn, f_samples.data() + j * nv, nv);
    }
  }
  return m;
}

double cfl_time_step(const MomentSystem& sys, const field::Grid1D& grid, double cfl) {
  if (!(cfl > 0.0)) throw ArgumentError("cfl must be positive");
  return cfl * grid.dx() / sys.max_speed();
}

std::size_t step_count(double T, double dt) {
  if (T <= 0.0) return 0;
  const double ratio = T / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  return std::max<std::size_t>(n, 1);
}

MomentSolver::MomentSolver(const MomentSystem& sys, const field::Grid1D& grid, double rho_ion,
                           double neutrality_tol)
    : sys_(sys), grid_(grid), poisson_(grid, neutrality_tol), rho_ion_(rho_ion) {
  const auto size = static_cast<std::size_t>(sys.size()) * static_cast<std::size_t>(grid.nx);
  w_.resize(size);
  shifted_.resize(size);
}

void MomentSolver::advect_half(MomentField& m, double dt, bool reverse) {
  const auto rows = static_cast<std::size_t>(sys_.size());
  const auto nx = static_cast<std::size_t>(grid_.nx);
  const auto& k = simd::active();
  k.transform(sys_.Rt.data(), rows, rows, m.values.data(), w_.data(), nx);
  const double scale = (reverse ? -0.5 : 0.5) * dt / grid_.dx();
  for (std::size_t r = 0; r < rows; ++r) {
    simd::shift_periodic({w_.data() + r * nx, nx}, {shifted_.data() + r * nx, nx},
                         sys_.eigenvalues[r] * scale, k);
  }
  // m += R (shift(w) - w): constant rows leave m untouched bit for bit
  k.axpy(-1.0, w_.data(), shifted_.data(), rows * nx);
  k.transform(sys_.R.data(), rows, rows, shifted_.data(), w_.data(), nx);
  k.axpy(1.0, w_.data(), m.values.data(), rows * nx);
}

void MomentSolver::apply_source(MomentField& m, std::span<const double> c, double dt) const {
  const auto& k = simd::active();
  const auto nx = static_cast<std::size_t>(grid_.nx);
  // descending so each row reads the pre-update row below it
  for (int n = sys_.order; n >= 1; --n) {
    k.scaled_axpy(dt * std::sqrt(static_cast<double>(n)), c.data(), m.row(n - 1).data(),
                  m.row(n).data(), nx);
  }
  if (!sys_.closure_gradient.empty()) {
    k.axpy(-dt * std::sqrt(static_cast<double>(sys_.order + 1)), sys_.closure_gradient.data(),
           m.row(sys_.order).data(), nx);
  }
}

void MomentSolver::field_of(const MomentField& m, std::span<double> E) const {
  poisson_.field(m.density(), rho_ion_, E);
}

StepRecord MomentSolver::strang_step(MomentField& state, std::span<const double> H, double dt,
                                     std::size_t step_index) {
  if (!(dt > 0.0)) throw ArgumentError("strang_step: dt must be positive");
  if (H.size() != static_cast<std::size_t>(grid_.nx)) throw ArgumentError("strang_step: control has wrong length");
  if (state.order != sys_.order || state.nx != grid_.nx) throw ArgumentError("strang_step: state shape mismatch");

  StepRecord rec;
  rec.t_start = state.time;
  rec.dt = dt;

  advect_half(state, dt, false);
  rec.half = state;

  rec.field_total.resize(H.size());
  try {
    field_of(state, rec.field_total);
  } catch (const ModelError& e) {
    // m_0 is conserved exactly, so losing neutrality mid-run means the state blew up.
    throw NumericError("moment solver lost charge neutrality at step " + std::to_string(step_index) + ": " +
                           e.what(),
                       step_index);
  }
  for (std::size_t j = 0; j < H.size(); ++j) rec.field_total[j] += H[j];

  apply_source(state, rec.field_total, dt);
  advect_half(state, dt, false);
  state.time += dt;

  if (!all_finite(state.values)) {
    throw NumericError("moment solver blew up at step " + std::to_string(step_index), step_index);
  }
  return rec;
}

MomentTrajectory MomentSolver::integrate(const MomentField& initial, std::span<const double> H,
                                         double T, double cfl, const IntegrateOptions& opts) {
  rho_ion_ = opts.rho_ion;
  MomentTrajectory traj;
  traj.dt_nominal = cfl_time_step(sys_, grid_, cfl);
  MomentField state = initial;
  {
    std::vector<double> E0(static_cast<std::size_t>(grid_.nx));
    field_of(state, E0);  // rejects a non-neutral initial state before any stepping
  }
  if (opts.keep_states) traj.states.push_back(state);
  const std::size_t nsteps = step_count(T, traj.dt_nominal);
  const double t0 = initial.time;
  if (opts.keep_steps) traj.steps.reserve(nsteps);
  for (std::size_t s = 0; s < nsteps; ++s) {
    double dt = traj.dt_nominal;
    if (s + 1 == nsteps) dt = (t0 + T) - state.time;
    auto rec = strang_step(state, H, dt, s);
    if (s + 1 == nsteps) state.time = t0 + T;
    if (opts.keep_steps) traj.steps.push_back(std::move(rec));
    if (opts.keep_states) traj.states.push_back(state);
  }
  traj.final_state = std::move(state);
  return traj;
}

MomentField strang_step(const MomentField& state, const MomentSystem& sys, const field::Grid1D& grid,
                        std::span<const double> H, double dt, double rho_ion) {
  MomentSolver solver(sys, grid, rho_ion);
  MomentField out = state;
  solver.strang_step(out, H, dt);
  return out;
}

MomentTrajectory integrate(const MomentField& initial, const MomentSystem& sys,
                           const field::Grid1D& grid, std::span<const double> H, double T, double cfl,
                           const IntegrateOptions& opts) {
  MomentSolver solver(sys, grid, opts.rho_ion, opts.neutrality_tol);
  return solver.integrate(initial, H, T, cfl, opts);
}

double total_mass(const MomentField& m, const field::Grid1D& grid) {
  double s = 0.0;
  for (double v : m.row(0)) s += v;
  return s * grid.dx();
}

}  // namespace vpmc::moments
