#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "vpmc/diag.hpp"
#include "vpmc/errors.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/kinetic.hpp"

using namespace vpmc;
using namespace vpmc::kinetic;

namespace {

constexpr double kL = 10.0 * std::numbers::pi;

field::Grid1D standard_grid() { return field::Grid1D(kL, 100, field::VelocityAxis{}); }

}  // namespace

TEST_SUITE("kinetic") {
  TEST_CASE("perturbation and sampling") {
    const Perturbation c{Perturbation::Shape::Cos, 0.2, 1e-3};
    const Perturbation s{Perturbation::Shape::Sin, 0.2, 1e-3};
    CHECK(c(0.0) == doctest::Approx(1.001));
    CHECK(s(2.5 * std::numbers::pi) == doctest::Approx(1.001));
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f = sample(initial_distribution(mu, c), grid);
    CHECK(f.values.size() == 100u * 200u);
    CHECK(f.at(3, 17) == doctest::Approx(c(grid.x(3)) * mu(grid.v_axis().v(17))).epsilon(1e-15));
  }

  TEST_CASE("homogeneous equilibrium is a fixed point") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f0 = sample([&](double, double v) { return mu(v); }, grid);
    const std::vector<double> H(grid.nx, 0.0);
    KineticSolver s(grid);
    auto f = f0;
    for (int i = 0; i < 50; ++i) s.step(f, H, 0.1);
    CHECK(f.values == f0.values);
  }

  TEST_CASE("a narrow beam translates at its velocity") {
    // linear interpolation in x shifts the phase of this mode by 8% at Nx = 100;
    // the error converges away with dx
    const field::Grid1D grid(kL, 1600, field::VelocityAxis{});
    const double v0 = 1.0;  // a velocity node
    const double a = 1e-6;
    auto g = [](double x) { return std::exp(-(x - 10.0) * (x - 10.0) / 4.0); };
    auto beam = [&](double v) { return std::exp(-(v - v0) * (v - v0) / (2 * 0.04)) / std::sqrt(2 * std::numbers::pi * 0.04); };
    const auto f0 = sample([&](double x, double v) { return (1.0 + a * g(x)) * beam(v); }, grid);
    const std::vector<double> H(grid.nx, 0.0);
    // the beam frame density oscillates as cos(omega_p t) with omega_p = 1; before
    // t = pi / 2 that factor is positive and leaves the phase to pure transport
    const double T = 1.0;
    const auto f = KineticSolver(grid, 1.0 + a * 0.0, 1e-3).integrate(f0, H, T, 0.1);
    // position read off the phase of the first Fourier mode of the density; the
    // v-advection keeps the density of every x cell, so only transport at v0
    // moves it (linear interpolation adds a phase error of order (k dx)^3)
    auto centre = [&](const PhaseSpaceField& s) {
      const auto rho = s.density();
      const double k = 2 * std::numbers::pi / grid.length;
      double re = 0.0, im = 0.0;
      for (int j = 0; j < grid.nx; ++j) {
        re += rho[j] * std::cos(k * grid.x(j));
        im += rho[j] * std::sin(k * grid.x(j));
      }
      return std::atan2(im, re) / k;
    };
    CHECK(centre(f) - centre(f0) == doctest::Approx(v0 * T).epsilon(1e-3));
  }

  TEST_CASE("moments of phase-space data") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const int N = 6;
    const auto mbar = diag::equilibrium_moments(mu, grid, N);
    const auto m_eq = moments_of(sample([&](double, double v) { return mu(v); }, grid), N);
    for (int n = 0; n <= N; ++n) CHECK(m_eq.at(n, 7) == doctest::Approx(mbar[n]).epsilon(1e-14).scale(1.0));

    const auto f = sample(initial_distribution(mu, {}), grid);
    const auto m = moments_of(f, N);
    const auto rho = f.density();
    for (int j = 0; j < grid.nx; ++j) {
      CHECK(m.at(0, j) * std::pow(2 * std::numbers::pi, 0.25) == doctest::Approx(rho[j]).epsilon(1e-14));
      CHECK(rho[j] == doctest::Approx(1.0 + 1e-3 * std::cos(0.2 * grid.x(j))).epsilon(1e-7));
    }
    PhaseSpaceField zero(grid);
    for (double v : moments_of(zero, N).values) CHECK(v == 0.0);
  }

  TEST_CASE("mass conservation and Landau damping") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::maxwellian();
    const auto f0 = sample(initial_distribution(mu, {Perturbation::Shape::Cos, 0.2, 0.01}), grid);
    KineticSolver s(grid);
    const std::vector<double> H(grid.nx, 0.0);
    const double m0 = total_mass(f0);
    const double e0 = diag::electric_energy(s.field_of(f0), grid);
    double emax_late = 0.0;
    const auto f = s.integrate(f0, H, 30.0, 0.1, [&](const PhaseSpaceField& st, std::size_t) {
      CHECK(std::abs(total_mass(st) / m0 - 1.0) <= 1e-10);
      if (st.time > 15.0) emax_late = std::max(emax_late, diag::electric_energy(s.field_of(st), grid));
    });
    CHECK(f.time == doctest::Approx(30.0));
    CHECK(emax_late < e0);
  }

  TEST_CASE("uncontrolled two-stream growth") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f0 = sample(initial_distribution(mu, {}), grid);
    const std::vector<double> H(grid.nx, 0.0);
    const auto f40 = KineticSolver(grid).integrate(f0, H, 40.0, 0.1);
    const double J = diag::kinetic_perturbation(f40, mu);
    CHECK(J >= 0.225);
    CHECK(J <= 0.9);
  }

  TEST_CASE("observer sees every step and the last step is shortened") {
    const auto grid = standard_grid();
    const auto f0 = sample(initial_distribution(hermite::Equilibrium::maxwellian(), {}), grid);
    std::vector<double> times;
    KineticSolver(grid).integrate(f0, std::vector<double>(grid.nx, 0.0), 0.35, 0.1,
                                  [&](const PhaseSpaceField& s, std::size_t) { times.push_back(s.time); });
    REQUIRE(times.size() == 5);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == doctest::Approx(0.35).epsilon(1e-15));
  }

  TEST_CASE("errors") {
    const auto grid = standard_grid();
    KineticSolver s(grid);
    PhaseSpaceField f(grid);
    for (int j = 0; j < grid.nx; ++j) {
      for (int l = 0; l < grid.v_axis().nv; ++l) f.at(j, l) = hermite::Equilibrium::maxwellian()(grid.v_axis().v(l));
    }
    CHECK_THROWS_AS(s.step(f, std::vector<double>(5, 0.0), 0.1), ArgumentError);
    f.at(10, 100) = std::nan("");
    CHECK_THROWS(s.step(f, std::vector<double>(grid.nx, 0.0), 0.1));
    CHECK_THROWS_AS(KineticSolver(field::Grid1D(kL, 100)), ArgumentError);
  }
}
