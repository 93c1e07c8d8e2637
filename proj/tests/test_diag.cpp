#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vpmc/diag.hpp"
#include "vpmc/hermite.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"

using namespace vpmc;
using namespace vpmc::diag;

namespace {

constexpr double kL = 10.0 * std::numbers::pi;

field::Grid1D standard_grid() { return field::Grid1D(kL, 100, field::VelocityAxis{}); }

moments::MomentField constant_field(std::span<const double> col, int nx) {
  moments::MomentField m(static_cast<int>(col.size()) - 1, nx);
  for (int n = 0; n < m.order + 1; ++n) {
    for (int j = 0; j < nx; ++j) m.at(n, j) = col[n];
  }
  return m;
}

}  // namespace

TEST_SUITE("diag") {
  TEST_CASE("kinetic perturbation") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f = kinetic::sample([&](double, double v) { return mu(v); }, grid);
    CHECK(kinetic_perturbation(f, mu) == 0.0);
    const double c = 0.01;
    const auto g = kinetic::sample([&](double, double v) { return mu(v) + c; }, grid);
    CHECK(kinetic_perturbation(g, mu) == doctest::Approx(0.5 * c * c * kL * 16.0).epsilon(1e-12));
  }

  TEST_CASE("electric energy") {
    const auto grid = standard_grid();
    CHECK(electric_energy(std::vector<double>(100, 0.0), grid) == 0.0);
    std::vector<double> E(100);
    for (int j = 0; j < 100; ++j) E[j] = 5e-3 * std::sin(0.2 * grid.x(j));
    CHECK(electric_energy(E, grid) == doctest::Approx(1.963e-4).epsilon(1e-3));
    CHECK(electric_energy(E, grid) == doctest::Approx(0.5 * 25e-6 * 5 * std::numbers::pi).epsilon(1e-12));
  }

  TEST_CASE("uncontrolled two-stream field energy at t = 0 and t = 30") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const auto f0 = kinetic::sample(kinetic::initial_distribution(mu, {}), grid);
    kinetic::KineticSolver s(grid);
    CHECK(electric_energy(s.field_of(f0), grid) == doctest::Approx(1.963e-4).epsilon(2e-3));
    const auto f30 = s.integrate(f0, std::vector<double>(100, 0.0), 30.0, 0.1);
    const double e30 = electric_energy(s.field_of(f30), grid);
    CHECK(e30 >= 0.375);
    CHECK(e30 <= 1.5);
  }

  TEST_CASE("reconstruction of f_N") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::bump_on_tail(0.8, 0.2, 3.5, 0.5);
    const auto mbar = equilibrium_moments(mu, grid, 10);
    const auto eq = constant_field(mbar, grid.nx);
    const auto f = reconstruct_fN(eq, mu, grid);
    for (int l = 0; l < grid.v_axis().nv; ++l) CHECK(f.at(4, l) == mu(grid.v_axis().v(l)));

    auto one = eq;
    one.at(0, 9) += 0.02;
    const auto g = reconstruct_fN(one, mu, grid);
    hermite::HermiteBasis b(1);
    for (int l = 0; l < grid.v_axis().nv; ++l) {
      const double v = grid.v_axis().v(l);
      CHECK(g.at(9, l) - mu(v) == doctest::Approx(0.02 * b.eval_function(0, v)).epsilon(1e-12).scale(1e-3));
      CHECK(g.at(8, l) == mu(v));
    }
  }

  TEST_CASE("moments of the reconstruction return the coefficients") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    // low order: the Gram matrix of the [-8, 8] grid is exact to round-off only
    // while 8^(2N) e^{-32} stays negligible
    const int N = 4;
    const auto mbar = equilibrium_moments(mu, grid, N);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    moments::MomentField m(N, grid.nx);
    for (int n = 0; n <= N; ++n) {
      for (int j = 0; j < grid.nx; ++j) m.at(n, j) = mbar[n] + 1e-2 * nd(rng);
    }
    const auto back = kinetic::moments_of(reconstruct_fN(m, mu, grid), N);
    for (std::size_t i = 0; i < m.values.size(); ++i) CHECK(back.values[i] == doctest::Approx(m.values[i]).epsilon(1e-9).scale(1.0));
  }

  TEST_CASE("L2 bound") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const int N = 10;
    const auto mbar = equilibrium_moments(mu, grid, N);
    const auto eq = constant_field(mbar, grid.nx);
    const auto z = l2_bound_check(eq, mu, grid);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);

    // m_0 only, constant in x: ratio is int He~_0^2 e^{-v^2} dv = 1/sqrt(2)
    auto m0 = eq;
    for (int j = 0; j < grid.nx; ++j) m0.at(0, j) += 0.05;
    const auto r = l2_bound_check(m0, mu, grid);
    double oracle = 0.0;
    for (int l = 0; l < 400000; ++l) {
      const double v = -10.0 + (l + 0.5) * 20.0 / 400000;
      oracle += std::exp(-v * v) / std::sqrt(2 * std::numbers::pi) * 20.0 / 400000;
    }
    CHECK(oracle == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.lhs / r.rhs == doctest::Approx(oracle).epsilon(1e-10));

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
      auto m = eq;
      for (auto& v : m.values) v += 1e-3 * nd(rng);
      const auto b = l2_bound_check(m, mu, grid);
      CHECK(b.lhs >= 0.0);
      CHECK(b.lhs <= b.rhs * (1 + 1e-6));
    }
  }

  TEST_CASE("time-series records") {
    const auto grid = standard_grid();
    const auto mu = hermite::Equilibrium::two_stream(2.4);
    const int N = 6;
    const auto mbar = equilibrium_moments(mu, grid, N);
    const auto f0 = kinetic::sample(kinetic::initial_distribution(mu, {}), grid);
    kinetic::KineticSolver s(grid);
    const auto E = s.field_of(f0);
    const auto rk = record_kinetic(f0, E, mu, mbar);
    CHECK(rk.t == 0.0);
    CHECK(rk.J == doctest::Approx(kinetic_perturbation(f0, mu)));
    CHECK(rk.E_energy == doctest::Approx(electric_energy(E, grid)));
    CHECK(rk.moment_misfit == doctest::Approx(moment_misfit(kinetic::moments_of(f0, N), mbar, grid)));
    CHECK(rk.J >= 0.0);
    CHECK(rk.moment_misfit >= 0.0);

    const auto m = moments::project_initial(kinetic::initial_distribution(mu, {}), N, grid);
    const auto rm = record_moments(m, E, mu, mbar, grid);
    CHECK(rm.J == doctest::Approx(kinetic_perturbation(reconstruct_fN(m, mu, grid), mu)));
    CHECK(rm.J <= 2 * rm.moment_misfit);
  }
}
