// aarch64 only; Advanced SIMD is part of the base ISA there.
#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace vpmc::simd::detail {
namespace {

void lerp_neon(const double* a, const double* b, double theta, double* dst, std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(theta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t d = vsubq_f64(vld1q_f64(b + i), va);
    vst1q_f64(dst + i, vaddq_f64(va, vmulq_f64(vt, d)));
  }
  for (; i < n; ++i) {
    const double y = theta * (b[i] - a[i]);
    dst[i] = a[i] + y;
  }
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void scaled_axpy_neon(double alpha, const double* s, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t as = vmulq_f64(va, vld1q_f64(s + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(as, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) {
    y[i] += alpha * s[i] * x[i];
  }
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

double sum_sq_dev_neon(const double* x, double c, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vc);
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = x[i] - c;
    total += d * d;
  }
  return total;
}

void transform_neon(const double* m, std::size_t rows, std::size_t inner, const double* in,
                    double* out, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* coef = m + r * inner;
    double* dst = out + r * n;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
      float64x2_t a0 = vdupq_n_f64(0.0);
      float64x2_t a1 = vdupq_n_f64(0.0);
      float64x2_t a2 = vdupq_n_f64(0.0);
      float64x2_t a3 = vdupq_n_f64(0.0);
      for (std::size_t c = 0; c < inner; ++c) {
        const float64x2_t w = vdupq_n_f64(coef[c]);
        const double* src = in + c * n + j;
        a0 = vfmaq_f64(a0, w, vld1q_f64(src));
        a1 = vfmaq_f64(a1, w, vld1q_f64(src + 2));
        a2 = vfmaq_f64(a2, w, vld1q_f64(src + 4));
        a3 = vfmaq_f64(a3, w, vld1q_f64(src + 6));
      }
      vst1q_f64(dst + j, a0);
      vst1q_f64(dst + j + 2, a1);
      vst1q_f64(dst + j + 4, a2);
      vst1q_f64(dst + j + 6, a3);
    }
    for (; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < inner; ++c) {
        acc += coef[c] * in[c * n + j];
      }
      dst[j] = acc;
    }
  }
}

}  // namespace

const KernelTable kNeonTable{
    Isa::Neon,  lerp_neon,       axpy_neon,      scaled_axpy_neon,
    dot_neon,   sum_sq_dev_neon, transform_neon,
};

}  // namespace vpmc::simd::detail
