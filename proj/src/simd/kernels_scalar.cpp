#include "kernels_internal.hpp"

namespace vpmc::simd::detail {
namespace {

void lerp_scalar(const double* a, const double* b, double theta, double* dst, std::size_t n) {
  // a + theta (b - a) is exact on constant data
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = a[i] + theta * (b[i] - a[i]);
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void scaled_axpy_scalar(double alpha, const double* s, const double* x, double* y,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * s[i] * x[i];
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

double sum_sq_dev_scalar(const double* x, double c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - c;
    acc += d * d;
  }
  return acc;
}

void transform_scalar(const double* m, std::size_t rows, std::size_t inner, const double* in,
                      double* out, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out + r * n;
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < inner; ++c) {
        acc += m[r * inner + c] * in[c * n + j];
      }
      dst[j] = acc;
    }
  }
}

}  // namespace

const KernelTable kScalarTable{
    Isa::Scalar,   lerp_scalar,        axpy_scalar,      scaled_axpy_scalar,
    dot_scalar,    sum_sq_dev_scalar,  transform_scalar,
};

}  // namespace vpmc::simd::detail
