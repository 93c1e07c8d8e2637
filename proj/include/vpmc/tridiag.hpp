#pragma once

#include <span>
#include <vector>

namespace vpmc {

struct TridiagonalEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major n x n, column k is the k-th eigenvector
};

// Eigen-decomposition of the symmetric tridiagonal matrix with the given
// diagonal and off-diagonal. Eigenvalues sorted ascending; each eigenvector is
// unit length with its first non-negligible entry positive.
// Throws NumericError if the iteration does not converge.
TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> off_diagonal);

}  // namespace vpmc
