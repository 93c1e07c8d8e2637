#include "vpmc/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpmc/errors.hpp"
#include "vpmc/parallel.hpp"
#include "vpmc/simd.hpp"

namespace vpmc::adjoint {

std::vector<double> GradientVector::flatten() const {
  std::vector<double> out(d_alpha);
  out.insert(out.end(), d_beta.begin(), d_beta.end());
  return out;
}

GradientVector GradientVector::from_flat(std::span<const double> flat, int K) {
  if (K < 0 || flat.size() != static_cast<std::size_t>(2 * K + 1)) {
    throw ArgumentError("GradientVector: expected " + std::to_string(2 * K + 1) + " entries");
  }
  GradientVector g;
  g.d_alpha.assign(flat.begin(), flat.begin() + K);
  g.d_beta.assign(flat.begin() + K, flat.end());
  return g;
}

double GradientVector::inf_norm() const {
  double n = 0.0;
  for (double v : d_alpha) n = std::max(n, std::abs(v));
  for (double v : d_beta) n = std::max(n, std::abs(v));
  return n;
}

double loss(const moments::MomentField& mT, std::span<const double> mbar, const field::Grid1D& grid) {
  if (mbar.size() != static_cast<std::size_t>(mT.order + 1)) throw ArgumentError("loss: mbar has wrong length");
  const auto& k = simd::active();
  const auto nx = static_cast<std::size_t>(mT.nx);
  double s = 0.0;
  for (int n = 0; n <= mT.order; ++n) s += k.sum_sq_dev(mT.row(n).data(), mbar[static_cast<std::size_t>(n)], nx);
  return 0.5 * s * grid.dx();
}

AdjointField terminal_condition(const moments::MomentField& mT, std::span<const double> mbar) {
  if (mbar.size() != static_cast<std::size_t>(mT.order + 1)) {
    throw ArgumentError("terminal_condition: mbar has wrong length");
  }
  AdjointField lam(mT.order, mT.nx, mT.time);
  for (int n = 0; n <= mT.order; ++n) {
    const double c = mbar[static_cast<std::size_t>(n)];
    auto src = mT.row(n);
    auto dst = lam.row(n);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = -(src[j] - c);
  }
  return lam;
}

AdjointSolver::AdjointSolver(const moments::MomentSystem& sys, const field::Grid1D& grid)
    : ops_(sys, grid) {}

AdjointStepResult AdjointSolver::step(const AdjointField& state, std::span<const double> E_plus_H,
                                      double dt, std::size_t step_index) {
  const auto& sys = ops_.system();
  const auto nx = static_cast<std::size_t>(ops_.grid().nx);
  if (!(dt > 0.0)) throw ArgumentError("adjoint_step: dt must be positive");
  if (E_plus_H.size() != nx) throw SequencingError("adjoint_step: stored field has wrong length");
  if (state.order != sys.order || state.nx != ops_.grid().nx) throw ArgumentError("adjoint_step: state shape mismatch");

  AdjointStepResult out;
  out.previous = state;
  ops_.advect_half(out.previous, dt, true);
  out.source_level = out.previous;

  // Transposed source: lambda_n += dt c sqrt(n+1) lambda_{n+1}, ascending so
  // each row reads the pre-update row above it.
  const auto& k = simd::active();
  for (int n = 0; n < sys.order; ++n) {
    k.scaled_axpy(dt * std::sqrt(static_cast<double>(n + 1)), E_plus_H.data(),
                  out.previous.row(n + 1).data(), out.previous.row(n).data(), nx);
  }
  ops_.advect_half(out.previous, dt, true);
  out.previous.time = state.time - dt;
  out.source_level.time = state.time - dt;

  for (double v : out.previous.values) {
    if (!std::isfinite(v)) {
      throw NumericError("adjoint solver blew up at step " + std::to_string(step_index), step_index);
    }
  }
  return out;
}

AdjointStepResult adjoint_step(const AdjointField& state, const moments::MomentSystem& sys,
                               const field::Grid1D& grid, std::span<const double> E_plus_H, double dt) {
  AdjointSolver solver(sys, grid);
  return solver.step(state, E_plus_H, dt);
}

AdjointTrajectory solve_backward(const moments::MomentTrajectory& forward, const AdjointField& terminal,
                                 const moments::MomentSystem& sys, const field::Grid1D& grid) {
  if (forward.steps.empty()) throw SequencingError("solve_backward: forward history was not recorded");
  const auto& last = forward.steps.back();
  const double t_end = last.t_start + last.dt;
  if (std::abs(terminal.time - t_end) > 1e-9 * std::max(1.0, std::abs(t_end))) {
    throw SequencingError("solve_backward: terminal time " + std::to_string(terminal.time) +
                          " does not match forward end time " + std::to_string(t_end));
  }
  AdjointSolver solver(sys, grid);
  AdjointTrajectory out;
  out.source_levels.resize(forward.steps.size());
  AdjointField lam = terminal;
  for (std::size_t s = forward.steps.size(); s-- > 0;) {
    const auto& rec = forward.steps[s];
    if (rec.field_total.empty()) throw SequencingError("solve_backward: step " + std::to_string(s) + " has no stored field");
    auto r = solver.step(lam, rec.field_total, rec.dt, s);
    out.source_levels[s] = std::move(r.source_level);
    lam = std::move(r.previous);
  }
  out.initial = std::move(lam);
  return out;
}

GradientVector assemble_gradient(const moments::MomentTrajectory& forward, const AdjointTrajectory& backward,
                                 const moments::MomentSystem& sys, const field::Grid1D& grid,
                                 const field::ControlParams& shape) {
  if (forward.steps.size() != backward.source_levels.size()) {
    throw SequencingError("assemble_gradient: forward has " + std::to_string(forward.steps.size()) +
                          " steps, backward has " + std::to_string(backward.source_levels.size()));
  }
  const auto nx = static_cast<std::size_t>(grid.nx);
  const auto& k = simd::active();
  // g_j = sum_steps dt lambda*_j^T D m_half_j
  std::vector<double> g(nx, 0.0);
  for (std::size_t s = 0; s < forward.steps.size(); ++s) {
    const auto& rec = forward.steps[s];
    const auto& lam = backward.source_levels[s];
    if (std::abs(lam.time - rec.t_start) > 1e-9 * std::max(1.0, std::abs(rec.t_start)) ||
        lam.order != sys.order || rec.half.order != sys.order || lam.nx != grid.nx) {
      throw SequencingError("assemble_gradient: time level mismatch at step " + std::to_string(s));
    }
    for (int n = 1; n <= sys.order; ++n) {
      k.scaled_axpy(rec.dt * std::sqrt(static_cast<double>(n)), lam.row(n).data(),
                    rec.half.row(n - 1).data(), g.data(), nx);
    }
  }
  const auto x = grid.nodes();
  const auto psi = field::basis_matrix(shape.K, x, shape.wavenumber_unit);
  std::vector<double> flat(static_cast<std::size_t>(2 * shape.K + 1));
  for (std::size_t c = 0; c < flat.size(); ++c) flat[c] = -grid.dx() * k.dot(psi.data() + c * nx, g.data(), nx);
  return GradientVector::from_flat(flat, shape.K);
}

namespace {

moments::MomentTrajectory run_forward(const ControlProblem& prob, std::span<const double> flat_params,
                                      bool keep_steps) {
  const auto params = field::ControlParams::from_flat(flat_params, prob.K, prob.wavenumber_unit);
  const auto H = field::eval_control(params, prob.grid.nodes());
  moments::IntegrateOptions opts;
  opts.rho_ion = prob.rho_ion;
  opts.keep_steps = keep_steps;
  return moments::integrate(prob.initial, prob.sys, prob.grid, H, prob.T, prob.cfl, opts);
}

}  // namespace

double evaluate_loss(const ControlProblem& prob, std::span<const double> flat_params) {
  const auto traj = run_forward(prob, flat_params, false);
  return loss(traj.final_state, prob.mbar, prob.grid);
}

Evaluation adjoint_gradient(const ControlProblem& prob, std::span<const double> flat_params) {
  auto traj = run_forward(prob, flat_params, true);
  Evaluation ev;
  ev.loss = loss(traj.final_state, prob.mbar, prob.grid);
  const auto terminal = terminal_condition(traj.final_state, prob.mbar);
  const auto back = solve_backward(traj, terminal, prob.sys, prob.grid);
  ev.grad = assemble_gradient(traj, back, prob.sys, prob.grid,
                              field::ControlParams::zeros(prob.K, prob.wavenumber_unit));
  ev.final_state = std::move(traj.final_state);
  return ev;
}

std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                               std::span<const double> x, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite_difference_gradient: step must be positive");
  std::vector<double> g(x.size());
  parallel_for(x.size(), [&](std::size_t i) {
    std::vector<double> xp(x.begin(), x.end());
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    g[i] = (fp - fm) / (2.0 * h);
  });
  return g;
}

Evaluation exact_gradient(const ControlProblem& prob, std::span<const double> flat_params, double h) {
  Evaluation ev;
  auto traj = run_forward(prob, flat_params, false);
  ev.loss = loss(traj.final_state, prob.mbar, prob.grid);
  ev.final_state = std::move(traj.final_state);
  const auto g = finite_difference_gradient(
      [&](std::span<const double> p) { return evaluate_loss(prob, p); }, flat_params, h);
  ev.grad = GradientVector::from_flat(g, prob.K);
  return ev;
}

}  // namespace vpmc::adjoint
