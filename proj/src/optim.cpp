#include "vpmc/optim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "vpmc/errors.hpp"

namespace vpmc::optim {

void Hyperparameters::validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) throw ArgumentError("beta must lie in [0, 1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in [0, 1)");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in [0, 1]");
  if (!(eta0 > 0.0)) throw ArgumentError("eta0 must be positive");
  if (!std::isfinite(resolved_kappa())) throw ArgumentError("kappa must be finite");
  if (max_iter == 0) throw ArgumentError("max_iter must be positive");
  if (!(grad_tol >= 0.0)) throw ArgumentError("grad_tol must be non-negative");
}

OptimState OptimState::initial(std::size_t n, const Hyperparameters& hyper, std::span<const double> params) {
  if (!params.empty() && params.size() != n) throw ArgumentError("OptimState: initial parameters have wrong length");
  OptimState s;
  s.params = params.empty() ? std::vector<double>(n, 0.0) : std::vector<double>(params.begin(), params.end());
  s.w.assign(n, 0.0);
  s.eta.assign(n, hyper.eta0);
  s.dbar.assign(n, 0.0);
  s.hyper = hyper;
  return s;
}

void jacobs_update(OptimState& state, std::span<const double> grad) {
  if (grad.size() != state.params.size()) throw ArgumentError("jacobs_update: gradient has wrong length");
  const auto& h = state.hyper;
  const double kappa = h.resolved_kappa();
  for (std::size_t k = 0; k < grad.size(); ++k) {
    const double prod = state.dbar[k] * grad[k];
    if (prod > 0.0) {
      state.eta[k] += kappa;
    } else if (prod < 0.0) {
      state.eta[k] *= (1.0 - h.gamma);
    }
    state.dbar[k] = (1.0 - h.theta) * grad[k] + h.theta * state.dbar[k];
  }
}

void momentum_update(OptimState& state, std::span<const double> grad) {
  if (grad.size() != state.params.size()) throw ArgumentError("momentum_update: gradient has wrong length");
  for (std::size_t k = 0; k < grad.size(); ++k) {
    if (!std::isfinite(grad[k])) {
      throw NumericError("momentum_update: non-finite gradient entry " + std::to_string(k), state.iter);
    }
  }
  jacobs_update(state, grad);
  for (std::size_t k = 0; k < grad.size(); ++k) {
    state.w[k] = state.hyper.beta * state.w[k] + grad[k];
    state.params[k] -= state.eta[k] * state.w[k];
  }
  ++state.iter;
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::MaxIterations: return "max-iterations";
    case Status::NumericAbort: return "numeric-abort";
  }
  return "unknown";
}

OptimResult optimize(const Objective& objective, std::span<const double> initial,
                     const Hyperparameters& hyper, const std::function<void(const IterationRecord&)>& on_iter) {
  hyper.validate();
  OptimResult res;
  res.hyper = hyper;
  OptimState state = OptimState::initial(initial.size(), hyper, initial);
  res.params = state.params;
  res.best_loss = std::numeric_limits<double>::infinity();
  const auto t0 = std::chrono::steady_clock::now();

  for (std::size_t it = 0; it < hyper.max_iter; ++it) {
    ObjectiveValue val;
    try {
      val = objective(state.params);
    } catch (const NumericError& e) {
      res.status = Status::NumericAbort;
      res.message = e.what();
      break;
    }
    if (val.grad.size() != state.params.size()) throw ArgumentError("optimize: objective returned a gradient of wrong length");

    IterationRecord rec;
    rec.iter = it;
    rec.loss = val.loss;
    rec.grad_inf_norm = 0.0;
    bool finite = std::isfinite(val.loss);
    for (double g : val.grad) {
      finite = finite && std::isfinite(g);
      rec.grad_inf_norm = std::max(rec.grad_inf_norm, std::abs(g));
    }
    rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.params = state.params;
    if (!finite) {
      res.status = Status::NumericAbort;
      res.message = "non-finite loss or gradient at iteration " + std::to_string(it);
      break;
    }
    res.records.push_back(rec);
    if (on_iter) on_iter(rec);

    if (val.loss < res.best_loss) {
      res.best_loss = val.loss;
      res.best_iter = it;
      res.params = state.params;
    }
    if (rec.grad_inf_norm < hyper.grad_tol) {
      res.status = Status::Converged;
      break;
    }
    if (it + 1 == hyper.max_iter) {
      res.status = Status::MaxIterations;
      break;
    }
    momentum_update(state, val.grad);
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace vpmc::optim
