#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vpmc/config.hpp"
#include "vpmc/errors.hpp"
#include "vpmc/io.hpp"

using namespace vpmc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "vpmc_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("two-stream preset") {
    const auto c = config::preset("two-stream");
    CHECK(c.equilibrium.kind == hermite::EquilibriumKind::TwoStream);
    CHECK(c.equilibrium.vbar == 2.4);
    CHECK(c.perturbation.amplitude == 1e-3);
    CHECK(c.perturbation.wavenumber == 0.2);
    CHECK(c.perturbation.shape == kinetic::Perturbation::Shape::Cos);
    CHECK(c.order == 30);
    CHECK(c.T == 30.0);
    CHECK(c.T_extend == 40.0);
    CHECK(c.K == 10);
    CHECK(c.length == doctest::Approx(10 * std::numbers::pi).epsilon(1e-15));
    CHECK(c.nx == 100);
    CHECK(c.nv == 200);
    CHECK(c.vmin == -8.0);
    CHECK(c.vmax == 8.0);
    CHECK(c.cfl == 3.0);
    CHECK(c.kinetic_dt == 0.1);
    CHECK(c.rho_ion.value() == 1.0);
    CHECK_NOTHROW(config::validate(c));
  }

  TEST_CASE("bump-on-tail preset") {
    const auto c = config::preset("bump-on-tail");
    CHECK(c.equilibrium.kind == hermite::EquilibriumKind::BumpOnTail);
    CHECK(c.equilibrium.omega1 == 0.8);
    CHECK(c.equilibrium.omega2 == 0.2);
    CHECK(c.equilibrium.u == 3.5);
    CHECK(c.equilibrium.vt == 0.5);
    CHECK(c.perturbation.shape == kinetic::Perturbation::Shape::Sin);
    CHECK(c.T == 25.0);
    CHECK(c.T_extend == 60.0);
    CHECK_THROWS_AS(config::preset("three-stream"), ConfigError);
  }

  TEST_CASE("empty configuration lists every required field") {
    try {
      config::resolve(std::nullopt, std::nullopt, {});
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      for (const char* key : {"equilibrium.kind", "moments.order", "control.K", "time.T"}) {
        CHECK(what.find(key) != std::string::npos);
      }
    }
  }

  TEST_CASE("errors name the key and line") {
    config::RunConfig c = config::preset("two-stream");
    try {
      config::apply_text(c, "grid.nx = 64\n# comment\nbogus.key = 3\n", "run.cfg");
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "bogus.key");
      CHECK(std::string(e.what()).find("run.cfg:3") != std::string::npos);
    }
    CHECK(c.nx == 64);
    CHECK_THROWS_AS(config::apply_text(c, "grid.nx = many\n"), ConfigError);
    CHECK_THROWS_AS(config::apply_text(c, "grid.nx\n"), ConfigError);
    CHECK_THROWS_AS(config::apply_override(c, "perturbation.shape=triangle"), ConfigError);
    try {
      config::resolve(std::string("two-stream"), std::nullopt, {"grid.nx=2"});
      FAIL("expected a range error");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "grid.nx");
    }
    try {
      config::resolve(std::string("two-stream"), std::nullopt, {"time.T=-3"});
      FAIL("expected a range error");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "time.T");
    }
  }

  TEST_CASE("layering and echo round trip") {
    const auto dir = scratch("config");
    std::ofstream(dir / "run.cfg") << "equilibrium.kind = two-stream\nequilibrium.vbar = 2.0\n"
                                      "moments.order = 12 # inline comment\ncontrol.K = 4\ntime.T = 5\n"
                                      "rho_ion = auto\noptimizer.eta0 = 3e-6\n";
    const auto c = config::resolve(std::string("bump-on-tail"), dir / "run.cfg", {"control.K=6", "output.dir=xyz"});
    CHECK(c.equilibrium.kind == hermite::EquilibriumKind::TwoStream);
    CHECK(c.equilibrium.vbar == 2.0);
    CHECK(c.order == 12);
    CHECK(c.K == 6);
    CHECK(!c.rho_ion.has_value());
    CHECK(c.out_dir == fs::path("xyz"));
    CHECK(c.optimizer.eta0 == 3e-6);

    // every line but the leading comment, which names the source
    const auto keys = [](const std::string& e) { return e.substr(e.find('\n')); };
    config::RunConfig again;
    config::apply_text(again, config::echo(c));
    CHECK(keys(config::echo(again)) == keys(config::echo(c)));
    CHECK_THROWS_AS(config::resolve(std::nullopt, dir / "missing.cfg", {}), ConfigError);
  }
}

TEST_SUITE("io") {
  TEST_CASE("number formatting keeps 17 significant digits") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::format_double(std::numbers::pi)) == std::numbers::pi);
  }

  TEST_CASE("params file round trip") {
    const auto dir = scratch("params");
    field::ControlParams p = field::ControlParams::zeros(3);
    p.alpha = {0.1, -2.5e-7, 3.0};
    p.beta = {1e-12, 0.0, -0.25, 7.0};
    io::write_params(dir / "params.txt", p);
    const auto q = io::read_params(dir / "params.txt");
    CHECK(q.K == 3);
    CHECK(q.alpha == p.alpha);
    CHECK(q.beta == p.beta);
    CHECK(slurp(dir / "params.txt").rfind("k,type,value\n", 0) == 0);
  }

  TEST_CASE("malformed params report the line") {
    const auto dir = scratch("params_bad");
    std::ofstream(dir / "p.txt") << "k,type,value\n1,sin,0.5\n2,tan,0.1\n";
    try {
      io::read_params(dir / "p.txt");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    std::ofstream(dir / "q.txt") << "k,type,value\n0,sin,1\n";
    CHECK_THROWS_AS(io::read_params(dir / "q.txt"), ParseError);
    std::ofstream(dir / "r.txt") << "k,type,value\n1,cos,abc\n";
    CHECK_THROWS_AS(io::read_params(dir / "r.txt"), ParseError);
  }

  TEST_CASE("csv parsing") {
    const auto t = io::parse_csv("t,J\n0,1.5\n1,2.5\n");
    CHECK(t.header == std::vector<std::string>{"t", "J"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == 2.5);
    CHECK(t.column("J") == 1);
    CHECK_THROWS_AS(t.column("E"), ArgumentError);
    try {
      io::parse_csv("t,J\n0,1\n1\n", "x.csv");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("x.csv:3") != std::string::npos);
    }
    try {
      io::parse_csv("t,J\n0,1\n1,nope\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(io::parse_csv(""), ParseError);
  }

  TEST_CASE("csv writers use the documented headers") {
    const auto dir = scratch("csv");
    const field::Grid1D grid(10.0, 4, field::VelocityAxis{-1, 1, 2});
    moments::MomentField m(2, 4);
    io::write_moments_csv(dir / "m.csv", m, grid);
    CHECK(io::read_csv(dir / "m.csv").header == std::vector<std::string>{"x", "m0", "m1", "m2"});
    kinetic::PhaseSpaceField f(grid);
    io::write_phase_csv(dir / "f.csv", f);
    const auto ft = io::read_csv(dir / "f.csv");
    CHECK(ft.header == std::vector<std::string>{"x", "v", "f"});
    CHECK(ft.rows.size() == 8);
    io::write_timeseries_csv(dir / "t.csv", {{0.5, 1.0, 2.0, 3.0}});
    const auto tt = io::read_csv(dir / "t.csv");
    CHECK(tt.header == std::vector<std::string>{"t", "J", "E_energy", "moment_misfit"});
    CHECK(tt.rows[0] == std::vector<double>{0.5, 1.0, 2.0, 3.0});
    io::write_run_log(dir / "r.csv", {{3, 0.25, 0.5, 1.5, {}}});
    CHECK(io::read_csv(dir / "r.csv").header == std::vector<std::string>{"iter", "loss", "grad_inf_norm", "elapsed_s"});
    io::write_control_csv(dir / "h.csv", field::ControlParams::zeros(2), grid);
    CHECK(io::read_csv(dir / "h.csv").header == std::vector<std::string>{"x", "H"});
  }

  TEST_CASE("binary snapshots round trip") {
    const auto dir = scratch("bin");
    const field::Grid1D grid(7.5, 5, field::VelocityAxis{-3, 3, 4});
    moments::MomentField a(2, 5, 0.0), b(2, 5, 1.25);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      a.values[i] = 0.1 * i;
      b.values[i] = -std::sqrt(static_cast<double>(i));
    }
    io::write_moment_snapshots(dir / "s.vpmom", {a, b}, grid);
    field::Grid1D g2;
    const auto back = io::read_moment_snapshots(dir / "s.vpmom", &g2);
    REQUIRE(back.size() == 2);
    CHECK(back[1].time == 1.25);
    CHECK(back[1].values == b.values);
    CHECK(back[0].order == 2);
    CHECK(g2.nx == 5);
    CHECK(g2.length == 7.5);
    CHECK(slurp(dir / "s.vpmom").substr(0, 6) == "VPMOM1");

    kinetic::PhaseSpaceField f(grid, 2.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(static_cast<double>(i));
    io::write_kinetic_snapshots(dir / "k.vpkin", {f});
    const auto kb = io::read_kinetic_snapshots(dir / "k.vpkin");
    REQUIRE(kb.size() == 1);
    CHECK(kb[0].values == f.values);
    CHECK(kb[0].time == 2.0);
    CHECK(kb[0].grid.v_axis().vmin == -3.0);
    CHECK(slurp(dir / "k.vpkin").substr(0, 6) == "VPKIN1");

    std::ofstream(dir / "junk.vpmom") << "NOTMAGIC";
    CHECK_THROWS_AS(io::read_moment_snapshots(dir / "junk.vpmom"), ParseError);
    std::ofstream(dir / "short.vpkin") << "VPKIN1";
    CHECK_THROWS_AS(io::read_kinetic_snapshots(dir / "short.vpkin"), ParseError);
  }
}
