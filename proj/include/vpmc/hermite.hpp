#pragma once

// Normalized probabilists' Hermite polynomials
//   He~_n(v) = He_n(v) / sqrt(n! sqrt(2 pi)),
// orthonormal under the weight exp(-v^2/2), and the Hermite functions
//   Hf_n(v) = He~_n(v) exp(-v^2/2),
// in which velocity profiles are expanded: f = sum_n m_n Hf_n with
// m_n = int f He~_n dv.

#include <span>
#include <vector>

namespace vpmc::hermite {

class HermiteBasis {
 public:
  explicit HermiteBasis(int max_order);

  int max_order() const noexcept { return max_order_; }

  // c_n = n! sqrt(2 pi), for 0 <= n <= max_order + 1.
  double normalization(int n) const;

  // He~_order(v) via the forward three-term recurrence; order may be max_order + 1.
  double eval(int order, double v) const;

  // Writes He~_0(v) .. He~_{out.size()-1}(v); out.size() <= max_order + 2.
  void eval_all(double v, std::span<double> out) const;

  // Hf_order(v) = He~_order(v) exp(-v^2/2).
  double eval_function(int order, double v) const;

 private:
  int max_order_;
  std::vector<double> norm_;
};

// He~_order(v); throws ArgumentError unless 0 <= order <= basis.max_order() + 1.
double eval_htilde(const HermiteBasis& basis, int order, double v);

// Weight-free He~ evaluation for any order (no range bookkeeping).
void htilde_all(double v, std::span<double> out);

// He~_n(v) and He~_n'(v) for n < values.size(), the derivative obtained by
// differentiating the three-term recurrence (independent of the ladder identity).
void htilde_with_derivative(double v, std::span<double> values, std::span<double> derivs);

enum class QuadratureScheme { UniformMidpoint, GaussHermite };

// int g(v) dv ~= sum_l weights[l] * g(nodes[l]).
struct VelocityQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureScheme scheme = QuadratureScheme::UniformMidpoint;

  std::size_t size() const noexcept { return nodes.size(); }

  // n cell-centred nodes on [vmin, vmax], all weights (vmax - vmin) / n.
  // Equivalent to the trapezoid rule for profiles vanishing at both ends.
  static VelocityQuadrature uniform(double vmin, double vmax, int n);

  // n-point Gauss-Hermite rule for the weight exp(-v^2/2) (Golub-Welsch),
  // stored with the weight folded in: weights[l] = w_l * exp(v_l^2 / 2).
  static VelocityQuadrature gauss_hermite(int n);

  // Gauss-Hermite weights without the exp(v^2/2) factor.
  std::vector<double> gaussian_weights() const;
};

// Table He~_n(v_l), row-major (order + 1) x nodes.
std::vector<double> htilde_table(std::span<const double> nodes, int order);

// m_n = sum_l w_l profile(v_l) He~_n(v_l), n = 0..order.
std::vector<double> project_moments(std::span<const double> profile,
                                    const VelocityQuadrature& quad, int order);

// sum_n coeffs[n] Hf_n(v) at each node.
std::vector<double> reconstruct_profile(std::span<const double> coeffs,
                                        std::span<const double> nodes);

// Result of the spectral tail-decay check for a Gaussian-class profile g.
struct TailDecayReport {
  std::vector<int> orders;         // truncation orders N
  std::vector<double> tail_sums;   // sum_{l > N} |g_l|^2 up to the projection order
  double slope = 0.0;              // least-squares slope of log(tail) vs log(N)
  double operator_norm = 0.0;      // int (A^k g)^2 exp(v^2/2) dv, A g = g' + v g
  std::vector<double> bound_ratio; // tail * N^k / operator_norm
};

// Projects g to projection_order and reports the tail sums for each N.
// Requires 2 * max(N) <= projection_order and k >= 1.
TailDecayReport tail_decay_check(std::span<const double> profile, const VelocityQuadrature& quad,
                                 int k, std::span<const int> orders, int projection_order = 80);

enum class EquilibriumKind { Maxwellian, TwoStream, BumpOnTail };

// Spatially homogeneous equilibrium mu(v) with unit velocity integral.
//   maxwellian:   N(v; u, vt)
//   two_stream:   N(v; vbar, 1) / 2 + N(v; -vbar, 1) / 2
//   bump_on_tail: omega1 N(v; 0, 1) + omega2 N(v; u, vt)
// where N(v; c, s) = exp(-(v - c)^2 / (2 s)) / sqrt(2 pi s); s is a variance.
struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::Maxwellian;
  double vbar = 0.0;
  double omega1 = 1.0;
  double omega2 = 0.0;
  double u = 0.0;
  double vt = 1.0;

  static Equilibrium maxwellian(double mean = 0.0, double variance = 1.0);
  static Equilibrium two_stream(double vbar);
  static Equilibrium bump_on_tail(double omega1, double omega2, double u, double vt);

  double operator()(double v) const;
  std::vector<double> sample(std::span<const double> nodes) const;
};

// Equilibrium moments mbar_n, n = 0..order, on the given quadrature.
std::vector<double> equilibrium_moments(const Equilibrium& mu, const VelocityQuadrature& quad,
                                        int order);

// (A g)(v) = g'(v) + v g(v) by second-order differences (one-sided at the ends).
std::vector<double> apply_ladder(std::span<const double> g, std::span<const double> nodes);

}  // namespace vpmc::hermite
