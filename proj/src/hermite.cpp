#include "vpmc/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vpmc/errors.hpp"
#include "vpmc/tridiag.hpp"

namespace vpmc::hermite {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2 pi)^(-1/4) = He~_0
const double kHe0 = std::pow(kTwoPi, -0.25);

double gaussian(double v, double centre, double variance) {
  const double d = v - centre;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(kTwoPi * variance);
}

}  // namespace

HermiteBasis::HermiteBasis(int max_order) : max_order_(max_order) {
  if (max_order < 0) throw ArgumentError("HermiteBasis: max_order must be >= 0");
  norm_.resize(static_cast<std::size_t>(max_order) + 2);
  double fact = 1.0;
  for (std::size_t n = 0; n < norm_.size(); ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    norm_[n] = fact * std::sqrt(kTwoPi);
  }
}

double HermiteBasis::normalization(int n) const {
  if (n < 0 || n > max_order_ + 1) throw ArgumentError("HermiteBasis::normalization: order out of range");
  return norm_[static_cast<std::size_t>(n)];
}

void htilde_all(double v, std::span<double> out) {
  if (out.empty()) return;
  out[0] = kHe0;
  if (out.size() == 1) return;
  out[1] = v * kHe0;
  // sqrt(n+1) He~_{n+1} = v He~_n - sqrt(n) He~_{n-1}
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    out[n + 1] = (v * out[n] - std::sqrt(dn) * out[n - 1]) / std::sqrt(dn + 1.0);
  }
}

void htilde_with_derivative(double v, std::span<double> values, std::span<double> derivs) {
  if (derivs.size() != values.size()) throw ArgumentError("htilde_with_derivative: span sizes differ");
  htilde_all(v, values);
  if (values.empty()) return;
  derivs[0] = 0.0;
  if (values.size() == 1) return;
  derivs[1] = kHe0;
  for (std::size_t n = 1; n + 1 < values.size(); ++n) {
    const double dn = static_cast<double>(n);
    derivs[n + 1] = (values[n] + v * derivs[n] - std::sqrt(dn) * derivs[n - 1]) / std::sqrt(dn + 1.0);
  }
}

void HermiteBasis::eval_all(double v, std::span<double> out) const {
  if (out.size() > static_cast<std::size_t>(max_order_) + 2) {
    throw ArgumentError("HermiteBasis::eval_all: requested more orders than the basis holds");
  }
  htilde_all(v, out);
}

double HermiteBasis::eval(int order, double v) const { return eval_htilde(*this, order, v); }

double HermiteBasis::eval_function(int order, double v) const {
  return eval(order, v) * std::exp(-0.5 * v * v);
}

double eval_htilde(const HermiteBasis& basis, int order, double v) {
  if (order < 0 || order > basis.max_order() + 1) {
    throw ArgumentError("eval_htilde: order " + std::to_string(order) + " outside [0, " +
                        std::to_string(basis.max_order() + 1) + "]");
  }
  std::vector<double> vals(static_cast<std::size_t>(order) + 1);
  htilde_all(v, vals);
  return vals.back();
}

VelocityQuadrature VelocityQuadrature::uniform(double vmin, double vmax, int n) {
  if (n < 2 || !(vmax > vmin)) throw ArgumentError("VelocityQuadrature::uniform: need n >= 2 and vmax > vmin");
  VelocityQuadrature q;
  q.scheme = QuadratureScheme::UniformMidpoint;
  const double dv = (vmax - vmin) / n;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.assign(static_cast<std::size_t>(n), dv);
  for (int l = 0; l < n; ++l) q.nodes[static_cast<std::size_t>(l)] = vmin + (l + 0.5) * dv;
  return q;
}

VelocityQuadrature VelocityQuadrature::gauss_hermite(int n) {
  if (n < 2) throw ArgumentError("VelocityQuadrature::gauss_hermite: need n >= 2");
  // Jacobi matrix of the monic He_n recurrence: zero diagonal, off-diagonal sqrt(k).
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n) - 1);
  for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k) - 1] = std::sqrt(static_cast<double>(k));
  const auto eig = symmetric_tridiagonal_eigen(diag, off);

  VelocityQuadrature q;
  q.scheme = QuadratureScheme::GaussHermite;
  q.nodes = eig.values;
  q.weights.resize(static_cast<std::size_t>(n));
  // Eigenvector-based weights are only accurate relative to the largest one, so
  // polish the nodes by Newton on He~_n and use the Christoffel function instead.
  std::vector<double> h(static_cast<std::size_t>(n) + 1), d(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l < n; ++l) {
    double& v = q.nodes[static_cast<std::size_t>(l)];
    for (int it = 0; it < 3; ++it) {
      htilde_with_derivative(v, h, d);
      if (d.back() == 0.0) break;
      v -= h.back() / d.back();
    }
    htilde_all(v, std::span<double>(h).first(static_cast<std::size_t>(n)));
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k)];
    q.weights[static_cast<std::size_t>(l)] = std::exp(0.5 * v * v) / s;
  }
  return q;
}

std::vector<double> VelocityQuadrature::gaussian_weights() const {
  std::vector<double> w(weights.size());
  for (std::size_t l = 0; l < w.size(); ++l) w[l] = weights[l] * std::exp(-0.5 * nodes[l] * nodes[l]);
  return w;
}

std::vector<double> htilde_table(std::span<const double> nodes, int order) {
  if (order < 0) throw ArgumentError("htilde_table: order must be >= 0");
  const std::size_t rows = static_cast<std::size_t>(order) + 1;
  const std::size_t cols = nodes.size();
  std::vector<double> table(rows * cols);
  std::vector<double> column(rows);
  for (std::size_t l = 0; l < cols; ++l) {
    htilde_all(nodes[l], column);
    for (std::size_t n = 0; n < rows; ++n) table[n * cols + l] = column[n];
  }
  return table;
}

std::vector<double> project_moments(std::span<const double> profile,
                                    const VelocityQuadrature& quad, int order) {
  if (profile.size() != quad.size()) {
    throw ArgumentError("project_moments: profile has " + std::to_string(profile.size()) +
                        " samples but the quadrature has " + std::to_string(quad.size()) + " nodes");
  }
  if (order < 0) throw ArgumentError("project_moments: order must be >= 0");
  std::vector<double> m(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> column(m.size());
  for (std::size_t l = 0; l < quad.size(); ++l) {
    const double wf = quad.weights[l] * profile[l];
    if (wf == 0.0) continue;
    htilde_all(quad.nodes[l], column);
    for (std::size_t n = 0; n < m.size(); ++n) m[n] += wf * column[n];
  }
  return m;
}

std::vector<double> reconstruct_profile(std::span<const double> coeffs,
                                        std::span<const double> nodes) {
  std::vector<double> out(nodes.size(), 0.0);
  if (coeffs.empty()) return out;
  std::vector<double> column(coeffs.size());
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    const double v = nodes[l];
    htilde_all(v, column);
    double acc = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) acc += coeffs[n] * column[n];
    out[l] = acc * std::exp(-0.5 * v * v);
  }
  return out;
}

std::vector<double> apply_ladder(std::span<const double> g, std::span<const double> nodes) {
  const std::size_t n = g.size();
  if (nodes.size() != n || n < 3) throw ArgumentError("apply_ladder: need >= 3 matching samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deriv;
    if (i == 0) {
      const double h1 = nodes[1] - nodes[0];
      const double h2 = nodes[2] - nodes[1];
      // one-sided second order on a possibly non-uniform grid
      deriv = (-(2 * h1 + h2) / (h1 * (h1 + h2))) * g[0] + ((h1 + h2) / (h1 * h2)) * g[1] -
              (h1 / (h2 * (h1 + h2))) * g[2];
    } else if (i == n - 1) {
      const double h1 = nodes[n - 2] - nodes[n - 3];
      const double h2 = nodes[n - 1] - nodes[n - 2];
      deriv = (h2 / (h1 * (h1 + h2))) * g[n - 3] - ((h1 + h2) / (h1 * h2)) * g[n - 2] +
              ((2 * h2 + h1) / (h2 * (h1 + h2))) * g[n - 1];
    } else {
      const double hm = nodes[i] - nodes[i - 1];
      const double hp = nodes[i + 1] - nodes[i];
      deriv = (-hp / (hm * (hm + hp))) * g[i - 1] + ((hp - hm) / (hm * hp)) * g[i] +
              (hm / (hp * (hm + hp))) * g[i + 1];
    }
    out[i] = deriv + nodes[i] * g[i];
  }
  return out;
}

TailDecayReport tail_decay_check(std::span<const double> profile, const VelocityQuadrature& quad,
                                 int k, std::span<const int> orders, int projection_order) {
  if (k < 1) throw ArgumentError("tail_decay_check: k must be >= 1");
  if (orders.empty()) throw ArgumentError("tail_decay_check: empty order list");
  const int max_n = *std::max_element(orders.begin(), orders.end());
  const int min_n = *std::min_element(orders.begin(), orders.end());
  if (min_n < 1) throw ArgumentError("tail_decay_check: truncation orders must be >= 1");
  if (2 * max_n > projection_order) {
    throw ArgumentError("tail_decay_check: projection order " + std::to_string(projection_order) +
                        " too close to the largest truncation order " + std::to_string(max_n));
  }

  const auto coeffs = project_moments(profile, quad, projection_order);

  TailDecayReport report;
  report.orders.assign(orders.begin(), orders.end());
  for (int n : orders) {
    double tail = 0.0;
    for (int l = projection_order; l > n; --l) {
      tail += coeffs[static_cast<std::size_t>(l)] * coeffs[static_cast<std::size_t>(l)];
    }
    report.tail_sums.push_back(tail);
  }

  std::vector<double> ak(profile.begin(), profile.end());
  for (int i = 0; i < k; ++i) ak = apply_ladder(ak, quad.nodes);
  double norm = 0.0;
  for (std::size_t l = 0; l < ak.size(); ++l) {
    const double v = quad.nodes[l];
    norm += quad.weights[l] * ak[l] * ak[l] * std::exp(0.5 * v * v);
  }
  report.operator_norm = norm;
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    report.bound_ratio.push_back(norm > 0.0
                                     ? report.tail_sums[i] * std::pow(report.orders[i], k) / norm
                                     : 0.0);
  }

  // least-squares slope over the strictly positive tails
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    if (report.tail_sums[i] <= 0.0) continue;
    const double x = std::log(static_cast<double>(report.orders[i]));
    const double y = std::log(report.tail_sums[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  report.slope = (count >= 2 && denom > 0) ? (count * sxy - sx * sy) / denom
                                           : -std::numeric_limits<double>::infinity();
  return report;
}

Equilibrium Equilibrium::maxwellian(double mean, double variance) {
  Equilibrium e;
  e.kind = EquilibriumKind::Maxwellian;
  e.u = mean;
  e.vt = variance;
  return e;
}

Equilibrium Equilibrium::two_stream(double vbar) {
  Equilibrium e;
  e.kind = EquilibriumKind::TwoStream;
  e.vbar = vbar;
  e.omega1 = 0.5;
  e.omega2 = 0.5;
  return e;
}

Equilibrium Equilibrium::bump_on_tail(double omega1, double omega2, double u, double vt) {
  Equilibrium e;
  e.kind = EquilibriumKind::BumpOnTail;
  e.omega1 = omega1;
  e.omega2 = omega2;
  e.u = u;
  e.vt = vt;
  return e;
}

double Equilibrium::operator()(double v) const {
  switch (kind) {
    case EquilibriumKind::Maxwellian:
      return gaussian(v, u, vt);
    case EquilibriumKind::TwoStream:
      return 0.5 * gaussian(v, vbar, 1.0) + 0.5 * gaussian(v, -vbar, 1.0);
    case EquilibriumKind::BumpOnTail:
      return omega1 * gaussian(v, 0.0, 1.0) + omega2 * gaussian(v, u, vt);
  }
  return 0.0;
}

std::vector<double> Equilibrium::sample(std::span<const double> nodes) const {
  std::vector<double> out(nodes.size());
  for (std::size_t l = 0; l < nodes.size(); ++l) out[l] = (*this)(nodes[l]);
  return out;
}

std::vector<double> equilibrium_moments(const Equilibrium& mu, const VelocityQuadrature& quad,
                                        int order) {
  return project_moments(mu.sample(quad.nodes), quad, order);
}

}  // namespace vpmc::hermite
