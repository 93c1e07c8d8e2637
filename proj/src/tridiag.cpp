#include "vpmc/tridiag.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "vpmc/errors.hpp"

namespace vpmc {

TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> off_diagonal) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  if (n == 0 || off_diagonal.size() + 1 != diagonal.size()) {
    throw ArgumentError("symmetric_tridiagonal_eigen: need n diagonal and n-1 off-diagonal entries");
  }
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diagonal.data(), n);
  Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = off_diagonal[static_cast<std::size_t>(i)];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("tridiagonal eigensolver did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return solver.eigenvalues()(a) < solver.eigenvalues()(b);
  });

  TridiagonalEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.assign(static_cast<std::size_t>(n * n), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    Eigen::VectorXd vec = solver.eigenvectors().col(src);
    vec.normalize();
    // sign convention: first entry above round-off is positive
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(vec(i)) > 1e-12) {
        if (vec(i) < 0) vec = -vec;
        break;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      out.vectors[static_cast<std::size_t>(i * n + k)] = vec(i);
    }
  }
  return out;
}

}  // namespace vpmc
