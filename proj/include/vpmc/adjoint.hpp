#pragma once

// Adjoint of the moment system
//   lambda_t + A lambda_x = -(E_N + H) D^T lambda,  lambda(T) = -(m(T) - mbar),
// and the control gradient dL/dalpha_k = -int int lambda^T psi_k D m dx dt.
//
// The backward step is the transpose of the forward Strang step with the field
// frozen at its recorded values, so the assembled gradient is the gradient of
// the discrete loss with the dependence of E on the control dropped.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vpmc/field.hpp"
#include "vpmc/moment_solver.hpp"

namespace vpmc::adjoint {

// lambda_n(x_j), same layout as the forward moments.
using AdjointField = moments::MomentField;

struct GradientVector {
  std::vector<double> d_alpha;  // K
  std::vector<double> d_beta;   // K + 1

  std::vector<double> flatten() const;
  static GradientVector from_flat(std::span<const double> flat, int K);
  double inf_norm() const;
};

// 1/2 sum_n sum_j (m_n(x_j) - mbar_n)^2 dx
double loss(const moments::MomentField& mT, std::span<const double> mbar, const field::Grid1D& grid);

// lambda(T) = -(m(T) - mbar)
AdjointField terminal_condition(const moments::MomentField& mT, std::span<const double> mbar);

struct AdjointStepResult {
  AdjointField previous;      // lambda one step earlier
  AdjointField source_level;  // lambda entering the source transpose (pairs with the forward half state)
};

class AdjointSolver {
 public:
  AdjointSolver(const moments::MomentSystem& sys, const field::Grid1D& grid);

  // One backward step over [t - dt, t] using the recorded E_N + H of that step.
  AdjointStepResult step(const AdjointField& state, std::span<const double> E_plus_H, double dt,
                         std::size_t step_index = 0);

 private:
  moments::MomentSolver ops_;
};

AdjointStepResult adjoint_step(const AdjointField& state, const moments::MomentSystem& sys,
                               const field::Grid1D& grid, std::span<const double> E_plus_H, double dt);

struct AdjointTrajectory {
  std::vector<AdjointField> source_levels;  // indexed like the forward steps
  AdjointField initial;                     // lambda(0)
};

// Integrates backwards through every recorded forward step.
// Throws SequencingError if the forward history is missing or inconsistent.
AdjointTrajectory solve_backward(const moments::MomentTrajectory& forward, const AdjointField& terminal,
                                 const moments::MomentSystem& sys, const field::Grid1D& grid);

// Gradient w.r.t. the control coefficients in ControlParams order.
// Throws SequencingError when the two histories do not share time levels.
GradientVector assemble_gradient(const moments::MomentTrajectory& forward, const AdjointTrajectory& backward,
                                 const moments::MomentSystem& sys, const field::Grid1D& grid,
                                 const field::ControlParams& shape);

// Moment-constrained control problem min_alpha L(m(T; alpha)).
struct ControlProblem {
  moments::MomentSystem sys;
  field::Grid1D grid;
  moments::MomentField initial;
  std::vector<double> mbar;  // equilibrium moments, N + 1 entries
  double T = 30.0;
  double cfl = 3.0;
  double rho_ion = 1.0;
  int K = 10;
  double wavenumber_unit = 0.2;
};

struct Evaluation {
  double loss = 0.0;
  GradientVector grad;
  moments::MomentField final_state;
};

// Forward solve only.
double evaluate_loss(const ControlProblem& prob, std::span<const double> flat_params);

// Forward solve, backward solve, gradient assembly.
Evaluation adjoint_gradient(const ControlProblem& prob, std::span<const double> flat_params);

// Central differences of an arbitrary objective, one pair of solves per
// coordinate, coordinates evaluated in parallel.
std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                               std::span<const double> x, double h = 1e-5);

// Exact-gradient fallback: central differences of the full forward solve.
Evaluation exact_gradient(const ControlProblem& prob, std::span<const double> flat_params, double h = 1e-5);

}  // namespace vpmc::adjoint
