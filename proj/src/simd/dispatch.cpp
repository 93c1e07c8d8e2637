#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace vpmc::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(VPMC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(VPMC_HAVE_NEON)
  return &detail::kNeonTable;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* pick_default() {
  if (const char* env = std::getenv("VPMC_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const auto* t = avx2_kernels()) return t;
  if (const auto* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

void force_isa(Isa isa) {
  const KernelTable* t = nullptr;
  switch (isa) {
    case Isa::Scalar:
      t = &scalar_kernels();
      break;
    case Isa::Avx2:
      t = avx2_kernels();
      break;
    case Isa::Neon:
      t = neon_kernels();
      break;
  }
  if (t == nullptr) {
    throw std::invalid_argument("SIMD variant '" + std::string(isa_name(isa)) +
                                "' is not available on this build/CPU");
  }
  current().store(t, std::memory_order_release);
}

void reset_isa() { current().store(pick_default(), std::memory_order_release); }

namespace {

// Splits a constant sub-cell shift into an integer start index and a blend
// weight: dst[j] = (1 - theta) * src[j + q] + theta * src[j + q + 1].
struct ShiftSplit {
  long q;
  double theta;
};

ShiftSplit split_offset(double offset) {
  // a non-finite offset would turn into an arbitrary cell index
  if (!std::isfinite(offset)) throw std::domain_error("shift: non-finite offset");
  const double p = -offset;
  const double fl = std::floor(p);
  return {static_cast<long>(fl), p - fl};
}

}  // namespace

void shift_periodic(std::span<const double> src, std::span<double> dst, double offset,
                    const KernelTable& k) {
  const std::size_t n = src.size();
  if (dst.size() != n) throw std::invalid_argument("shift_periodic: size mismatch");
  if (n == 0) return;
  const auto [q, theta] = split_offset(offset);
  const long nl = static_cast<long>(n);
  const std::size_t s0 = static_cast<std::size_t>(((q % nl) + nl) % nl);
  // Three contiguous pieces: [0, n-1-s0) reads src[s0..], one element wraps,
  // [n-s0, n) reads from the front.
  const std::size_t first = n - 1 - s0;
  if (first > 0) k.lerp(src.data() + s0, src.data() + s0 + 1, theta, dst.data(), first);
  dst[first] = src[n - 1] + theta * (src[0] - src[n - 1]);
  if (s0 > 0) k.lerp(src.data(), src.data() + 1, theta, dst.data() + n - s0, s0);
}

void shift_clamped(std::span<const double> src, std::span<double> dst, double offset,
                   const KernelTable& k) {
  const std::size_t n = src.size();
  if (dst.size() != n) throw std::invalid_argument("shift_clamped: size mismatch");
  if (n == 0) return;
  const auto [q, theta] = split_offset(offset);
  const long nl = static_cast<long>(n);
  auto at = [&](long i) { return (i >= 0 && i < nl) ? src[static_cast<std::size_t>(i)] : 0.0; };
  // Both taps inside for j in [lo, hi).
  const long lo = std::max(0L, -q);
  const long hi = std::min(nl, nl - 1 - q);
  for (long j = 0; j < std::min(lo, nl); ++j) {
    dst[static_cast<std::size_t>(j)] = at(j + q) + theta * (at(j + q + 1) - at(j + q));
  }
  if (hi > lo) {
    k.lerp(src.data() + (lo + q), src.data() + (lo + q + 1), theta, dst.data() + lo,
           static_cast<std::size_t>(hi - lo));
  }
  for (long j = std::max(hi, lo); j < nl; ++j) {
    dst[static_cast<std::size_t>(j)] = at(j + q) + theta * (at(j + q + 1) - at(j + q));
  }
}

}  // namespace vpmc::simd
