#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vpmc/field.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"
#include "vpmc/simd.hpp"

using namespace vpmc;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<const simd::KernelTable*> variants() {
  std::vector<const simd::KernelTable*> out;
  if (auto* t = simd::avx2_kernels()) out.push_back(t);
  if (auto* t = simd::neon_kernels()) out.push_back(t);
  return out;
}

// dst[j] = src(j - offset) with periodic linear interpolation, written out directly.
double periodic_sample(const std::vector<double>& src, double pos) {
  const double n = static_cast<double>(src.size());
  pos = std::fmod(pos, n);
  if (pos < 0) pos += n;
  const double fl = std::floor(pos);
  const double t = pos - fl;
  const auto i = static_cast<std::size_t>(fl) % src.size();
  return (1.0 - t) * src[i] + t * src[(i + 1) % src.size()];
}

double clamped_sample(const std::vector<double>& src, double pos) {
  const double fl = std::floor(pos);
  const double t = pos - fl;
  auto at = [&](double i) {
    return (i >= 0 && i < static_cast<double>(src.size())) ? src[static_cast<std::size_t>(i)] : 0.0;
  };
  return (1.0 - t) * at(fl) + t * at(fl + 1);
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("elementwise kernels match the scalar reference bit for bit") {
    const auto& ref = simd::scalar_kernels();
    for (const auto* k : variants()) {
      CAPTURE(std::string(simd::isa_name(k->isa)));
      for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 101u}) {
        const auto a = random_vec(n, 1), b = random_vec(n, 2), s = random_vec(n, 3);
        std::vector<double> r1(n), r2(n);
        ref.lerp(a.data(), b.data(), 0.3125, r1.data(), n);
        k->lerp(a.data(), b.data(), 0.3125, r2.data(), n);
        CHECK(r1 == r2);

        auto y1 = b, y2 = b;
        ref.axpy(-0.7, a.data(), y1.data(), n);
        k->axpy(-0.7, a.data(), y2.data(), n);
        CHECK(y1 == y2);

        y1 = b;
        y2 = b;
        ref.scaled_axpy(1.3, s.data(), a.data(), y1.data(), n);
        k->scaled_axpy(1.3, s.data(), a.data(), y2.data(), n);
        CHECK(y1 == y2);
      }
    }
  }

  TEST_CASE("reductions and transform match the scalar reference to round-off") {
    const auto& ref = simd::scalar_kernels();
    for (const auto* k : variants()) {
      for (std::size_t n : {1u, 5u, 64u, 203u}) {
        const auto a = random_vec(n, 4), b = random_vec(n, 5);
        CHECK(k->dot(a.data(), b.data(), n) == doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-13));
        CHECK(k->sum_sq_dev(a.data(), 0.25, n) ==
              doctest::Approx(ref.sum_sq_dev(a.data(), 0.25, n)).epsilon(1e-13));
      }
      const std::size_t rows = 7, inner = 7, n = 37;
      const auto m = random_vec(rows * inner, 6), in = random_vec(inner * n, 7);
      std::vector<double> o1(rows * n), o2(rows * n);
      ref.transform(m.data(), rows, inner, in.data(), o1.data(), n);
      k->transform(m.data(), rows, inner, in.data(), o2.data(), n);
      for (std::size_t i = 0; i < o1.size(); ++i) CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-13));
    }
  }

  TEST_CASE("transform computes the matrix product") {
    const auto& ref = simd::scalar_kernels();
    const std::vector<double> m{1, 2, 3, 4, 5, 6};  // 2 x 3
    const std::vector<double> in{1, 0, 0, 1, 1, 1};  // 3 x 2
    std::vector<double> out(4);
    ref.transform(m.data(), 2, 3, in.data(), out.data(), 2);
    CHECK(out == std::vector<double>{4, 5, 10, 11});
  }

  TEST_CASE("periodic and clamped shifts agree with direct interpolation") {
    const auto src = random_vec(50, 8);
    std::vector<double> dst(src.size());
    for (const auto* k : std::vector<const simd::KernelTable*>{&simd::scalar_kernels(), simd::avx2_kernels()}) {
      if (k == nullptr) continue;
      for (double off : {0.0, 0.25, -0.25, 1.0, 3.7, -12.4, 49.5, 123.456, -0.999999}) {
        CAPTURE(off);
        simd::shift_periodic(src, dst, off, *k);
        for (std::size_t j = 0; j < src.size(); ++j) {
          CHECK(dst[j] == doctest::Approx(periodic_sample(src, static_cast<double>(j) - off)).epsilon(1e-14));
        }
        simd::shift_clamped(src, dst, off, *k);
        for (std::size_t j = 0; j < src.size(); ++j) {
          CHECK(dst[j] == doctest::Approx(clamped_sample(src, static_cast<double>(j) - off)).epsilon(1e-14));
        }
      }
    }
  }

  TEST_CASE("periodic shift conserves the sum and the constant line") {
    const auto src = random_vec(64, 9);
    std::vector<double> dst(src.size());
    simd::shift_periodic(src, dst, 5.37, simd::scalar_kernels());
    double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      s0 += src[i];
      s1 += dst[i];
    }
    CHECK(s1 == doctest::Approx(s0).epsilon(1e-14));

    const std::vector<double> flat(64, 0.7311);
    simd::shift_periodic(flat, dst, 2.718, simd::active());
    for (double x : dst) CHECK(x == 0.7311);
  }

  TEST_CASE("forcing an ISA switches the active table") {
    simd::force_isa(simd::Isa::Scalar);
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    if (simd::avx2_kernels() == nullptr) {
      CHECK_THROWS(simd::force_isa(simd::Isa::Avx2));
    }
    if (simd::neon_kernels() == nullptr) {
      CHECK_THROWS(simd::force_isa(simd::Isa::Neon));
    }
    simd::reset_isa();
  }

  TEST_CASE("solvers give the same result on every kernel variant") {
    const field::Grid1D grid(10.0 * std::numbers::pi, 100, field::VelocityAxis{});
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f0 = kinetic::initial_distribution(mu, {});
    const std::vector<double> H(100, 0.0);
    const auto sys = moments::build_system(12);
    const auto m0 = moments::project_initial(f0, 12, grid);
    const auto p0 = kinetic::sample(f0, grid);

    simd::force_isa(simd::Isa::Scalar);
    const auto mref = moments::integrate(m0, sys, grid, H, 10.0).final_state;
    const auto pref = kinetic::KineticSolver(grid).integrate(p0, H, 5.0, 0.1);
    for (const auto* k : variants()) {
      simd::force_isa(k->isa);
      const auto m = moments::integrate(m0, sys, grid, H, 10.0).final_state;
      const auto p = kinetic::KineticSolver(grid).integrate(p0, H, 5.0, 0.1);
      double dm = 0, dp = 0;
      for (std::size_t i = 0; i < m.values.size(); ++i) dm = std::max(dm, std::abs(m.values[i] - mref.values[i]));
      for (std::size_t i = 0; i < p.values.size(); ++i) dp = std::max(dp, std::abs(p.values[i] - pref.values[i]));
      CHECK(dm <= 1e-12);
      CHECK(dp <= 1e-12);
    }
    simd::reset_isa();
  }
}
