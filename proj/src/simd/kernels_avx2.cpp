// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace vpmc::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void lerp_avx2(const double* a, const double* b, double theta, double* dst, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(theta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // sub + mul + add, no contraction: bit-identical to the scalar path
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(b + i), va);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(va, _mm256_mul_pd(vt, d)));
  }
  for (; i < n; ++i) {
    const double y = theta * (b[i] - a[i]);
    dst[i] = a[i] + y;
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_add_pd(_mm256_loadu_pd(y + i + 4), _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4))));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void scaled_axpy_avx2(double alpha, const double* s, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d as = _mm256_mul_pd(va, _mm256_loadu_pd(s + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(as, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) {
    y[i] += alpha * s[i] * x[i];
  }
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

double sum_sq_dev_avx2(const double* x, double c, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), vc);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = x[i] - c;
    acc += d * d;
  }
  return acc;
}

void transform_avx2(const double* m, std::size_t rows, std::size_t inner, const double* in,
                    double* out, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* coef = m + r * inner;
    double* dst = out + r * n;
    std::size_t j = 0;
    for (; j + 16 <= n; j += 16) {
      __m256d a0 = _mm256_setzero_pd();
      __m256d a1 = _mm256_setzero_pd();
      __m256d a2 = _mm256_setzero_pd();
      __m256d a3 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < inner; ++c) {
        const __m256d w = _mm256_set1_pd(coef[c]);
        const double* src = in + c * n + j;
        a0 = _mm256_fmadd_pd(w, _mm256_loadu_pd(src), a0);
        a1 = _mm256_fmadd_pd(w, _mm256_loadu_pd(src + 4), a1);
        a2 = _mm256_fmadd_pd(w, _mm256_loadu_pd(src + 8), a2);
        a3 = _mm256_fmadd_pd(w, _mm256_loadu_pd(src + 12), a3);
      }
      _mm256_storeu_pd(dst + j, a0);
      _mm256_storeu_pd(dst + j + 4, a1);
      _mm256_storeu_pd(dst + j + 8, a2);
      _mm256_storeu_pd(dst + j + 12, a3);
    }
    for (; j + 4 <= n; j += 4) {
      __m256d a0 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < inner; ++c) {
        a0 = _mm256_fmadd_pd(_mm256_set1_pd(coef[c]), _mm256_loadu_pd(in + c * n + j), a0);
      }
      _mm256_storeu_pd(dst + j, a0);
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

const KernelTable kAvx2Table{
    Isa::Avx2,  lerp_avx2,       axpy_avx2,      scaled_axpy_avx2,
    dot_avx2,   sum_sq_dev_avx2, transform_avx2,
};

}  // namespace vpmc::simd::detail
