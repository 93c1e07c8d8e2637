#pragma once

// Data-parallel inner loops shared by the solvers.
//
// Every kernel exists as a portable scalar reference and, where the build and
// the CPU allow it, as an AVX2/FMA (x86-64) or NEON (aarch64) variant. The
// variant is picked once at first use; VPMC_SIMD=scalar forces the reference
// path. Elementwise kernels use the reference operation order and match it bit
// for bit; reductions agree to round-off (different summation order).

#include <cstddef>
#include <span>
#include <string_view>

namespace vpmc::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // dst[i] = a[i] + theta * (b[i] - a[i])
  void (*lerp)(const double* a, const double* b, double theta, double* dst, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] += alpha * s[i] * x[i]
  void (*scaled_axpy)(double alpha, const double* s, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x[i] - c)^2
  double (*sum_sq_dev)(const double* x, double c, std::size_t n);
  // out (rows x n) = M (rows x inner) * in (inner x n), all row-major
  void (*transform)(const double* m, std::size_t rows, std::size_t inner, const double* in,
                    double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the feature
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Kernel table used by the solvers.
const KernelTable& active();
Isa active_isa();

// Overrides the automatic choice; throws if the variant is unavailable.
void force_isa(Isa isa);
void reset_isa();

// Periodic linear interpolation of a uniformly sampled line at positions
// j - offset (offset in cells): dst[j] = src(j - offset), wrapping modulo n.
void shift_periodic(std::span<const double> src, std::span<double> dst, double offset,
                    const KernelTable& k = active());

// Same as shift_periodic, but samples outside [0, n-1] read as zero.
void shift_clamped(std::span<const double> src, std::span<double> dst, double offset,
                   const KernelTable& k = active());

}  // namespace vpmc::simd
