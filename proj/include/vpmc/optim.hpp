#pragma once

// Heavy-ball gradient descent with per-parameter step sizes adapted by the
// Jacobs (delta-bar-delta) rule:
//   eta_k += kappa          if dbar_k * g_k > 0
//   eta_k *= (1 - gamma)    if dbar_k * g_k < 0
//   dbar_k = (1 - theta) g_k + theta dbar_k
//   w = beta w + g,  params -= eta * w

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vpmc::optim {

struct Hyperparameters {
  double beta = 0.9;
  double gamma = 0.3;
  double theta = 0.7;
  double eta0 = 0.1;
  double kappa = -1.0;  // negative means eta0 / 10
  std::size_t max_iter = 1000;
  double grad_tol = 1e-3;

  double resolved_kappa() const noexcept { return kappa < 0.0 ? eta0 / 10.0 : kappa; }
  // Throws ArgumentError for values outside their meaningful ranges.
  void validate() const;
};

struct OptimState {
  std::vector<double> params;
  std::vector<double> w;
  std::vector<double> eta;
  std::vector<double> dbar;
  std::size_t iter = 0;
  Hyperparameters hyper;

  // params = initial (zeros when empty), w = dbar = 0, eta = eta0.
  static OptimState initial(std::size_t n, const Hyperparameters& hyper,
                            std::span<const double> params = {});
};

// Step-size and smoothed-gradient update only.
void jacobs_update(OptimState& state, std::span<const double> grad);

// Jacobs update, then w = beta w + g and params -= eta * w; increments iter.
// Throws NumericError on a non-finite gradient.
void momentum_update(OptimState& state, std::span<const double> grad);

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> grad;
};

using Objective = std::function<ObjectiveValue(std::span<const double>)>;

struct IterationRecord {
  std::size_t iter = 0;
  double loss = 0.0;
  double grad_inf_norm = 0.0;
  double elapsed_s = 0.0;
  std::vector<double> params;
};

enum class Status { Converged, MaxIterations, NumericAbort };

std::string status_name(Status s);

struct OptimResult {
  std::vector<double> params;  // best-loss parameters seen
  double best_loss = 0.0;
  std::size_t best_iter = 0;
  Status status = Status::MaxIterations;
  std::string message;
  std::vector<IterationRecord> records;
  Hyperparameters hyper;
  OptimState final_state;
};

// Each iteration evaluates the objective once, stops when the gradient's
// infinity norm drops below grad_tol or after max_iter evaluations, and
// otherwise takes one momentum step. Solver failures end the run with
// NumericAbort and the best parameters so far.
OptimResult optimize(const Objective& objective, std::span<const double> initial,
                     const Hyperparameters& hyper,
                     const std::function<void(const IterationRecord&)>& on_iter = {});

}  // namespace vpmc::optim
