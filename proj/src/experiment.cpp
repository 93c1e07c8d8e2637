#include "vpmc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "vpmc/errors.hpp"
#include "vpmc/io.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"
#include "vpmc/optim.hpp"

namespace vpmc::experiment {

namespace fs = std::filesystem;

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

Setup make_setup(const config::RunConfig& cfg) {
  Setup s;
  s.grid = cfg.grid();
  s.mu = cfg.equilibrium;
  s.f0 = kinetic::sample(kinetic::initial_distribution(cfg.equilibrium, cfg.perturbation), s.grid);
  if (cfg.rho_ion) {
    s.rho_ion = *cfg.rho_ion;
  } else {
    const auto rho = s.f0.density();
    double sum = 0.0;
    for (double r : rho) sum += r;
    s.rho_ion = sum / static_cast<double>(rho.size());
  }
  s.mbar = diag::equilibrium_moments(s.mu, s.grid, cfg.order);
  return s;
}

adjoint::ControlProblem make_problem(const config::RunConfig& cfg, const Setup& setup) {
  adjoint::ControlProblem p;
  p.sys = moments::build_system(cfg.order);
  p.grid = setup.grid;
  p.initial = moments::project_initial(setup.f0.values, cfg.order, setup.grid);
  p.mbar = setup.mbar;
  p.T = cfg.T;
  p.cfl = cfg.cfl;
  p.rho_ion = setup.rho_ion;
  p.K = cfg.K;
  p.wavenumber_unit = cfg.wavenumber_unit;
  return p;
}

void write_resolved_config(const config::RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream(cfg.out_dir / "config.resolved") << config::echo(cfg);
}

KineticSummary run_kinetic(const config::RunConfig& cfg, const field::ControlParams& params, bool write) {
  const auto setup = make_setup(cfg);
  const auto H = field::eval_control(params, setup.grid.nodes());
  kinetic::KineticSolver solver(setup.grid, setup.rho_ion);
  KineticSummary out;
  std::vector<kinetic::PhaseSpaceField> snaps;

  auto record = [&](const kinetic::PhaseSpaceField& f) {
    const auto E = solver.field_of(f);
    out.series.push_back(diag::record_kinetic(f, E, setup.mu, setup.mbar));
  };
  std::size_t global_step = 0;
  auto observer = [&](const kinetic::PhaseSpaceField& f, std::size_t step) {
    if (step == 0) return;  // segment starts are recorded explicitly
    ++global_step;
    if (global_step % cfg.stride == 0 && !near(f.time, cfg.T)) record(f);
  };

  record(setup.f0);
  snaps.push_back(setup.f0);
  auto fT = solver.integrate(setup.f0, H, cfg.T, cfg.kinetic_dt, observer);
  if (out.series.empty() || !near(out.series.back().t, fT.time)) record(fT);
  out.at_T = out.series.back();
  snaps.push_back(fT);
  if (cfg.T_extend > cfg.T) {
    auto fE = solver.integrate(fT, H, cfg.T_extend - cfg.T, cfg.kinetic_dt, observer);
    if (!near(out.series.back().t, fE.time)) record(fE);
    out.at_extend = out.series.back();
    snaps.push_back(std::move(fE));
  }

  if (write) {
    write_resolved_config(cfg);
    io::write_timeseries_csv(cfg.out_dir / "timeseries.csv", out.series);
    io::write_control_csv(cfg.out_dir / "H.csv", params, setup.grid);
    io::write_kinetic_snapshots(cfg.out_dir / "snapshots.vpkin", snaps);
    for (const auto& f : snaps) {
      char name[64];
      std::snprintf(name, sizeof name, "phase_t%g.csv", f.time);
      io::write_phase_csv(cfg.out_dir / name, f);
    }
  }
  return out;
}

MomentSummary run_moments(const config::RunConfig& cfg, const field::ControlParams& params, bool write) {
  const auto setup = make_setup(cfg);
  const auto prob = make_problem(cfg, setup);
  const auto H = field::eval_control(params, setup.grid.nodes());
  moments::IntegrateOptions opts;
  opts.rho_ion = setup.rho_ion;
  opts.keep_states = true;
  opts.keep_steps = false;
  const auto traj = moments::integrate(prob.initial, prob.sys, setup.grid, H, cfg.T, cfg.cfl, opts);
  moments::MomentSolver solver(prob.sys, setup.grid, setup.rho_ion);
  MomentSummary out;
  std::vector<double> E(static_cast<std::size_t>(setup.grid.nx));
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    if (s % cfg.stride != 0 && s + 1 != traj.states.size()) continue;
    solver.field_of(traj.states[s], E);
    out.series.push_back(diag::record_moments(traj.states[s], E, setup.mu, setup.mbar, setup.grid));
  }
  out.loss = adjoint::loss(traj.final_state, setup.mbar, setup.grid);
  if (write) {
    write_resolved_config(cfg);
    io::write_timeseries_csv(cfg.out_dir / "timeseries_moments.csv", out.series);
    io::write_moments_csv(cfg.out_dir / "moments_t0.csv", traj.states.front(), setup.grid);
    io::write_moments_csv(cfg.out_dir / "moments_T.csv", traj.final_state, setup.grid);
    io::write_moment_snapshots(cfg.out_dir / "snapshots.vpmom", {traj.states.front(), traj.final_state}, setup.grid);
    io::write_control_csv(cfg.out_dir / "H.csv", params, setup.grid);
  }
  return out;
}

OptimizeSummary run_optimize(const config::RunConfig& cfg, bool write, bool verbose) {
  const auto setup = make_setup(cfg);
  const auto prob = make_problem(cfg, setup);
  const auto gradient_mode = cfg.gradient;
  const double h = cfg.fd_step;
  optim::Objective objective = [&](std::span<const double> a) {
    auto ev = gradient_mode == config::GradientMode::Adjoint ? adjoint::adjoint_gradient(prob, a)
                                                             : adjoint::exact_gradient(prob, a, h);
    return optim::ObjectiveValue{ev.loss, ev.grad.flatten()};
  };
  auto on_iter = [&](const optim::IterationRecord& r) {
    if (verbose && (r.iter % 50 == 0)) {
      std::fprintf(stderr, "iter %zu  loss %.6e  |grad| %.3e  %.1fs\n", r.iter, r.loss, r.grad_inf_norm, r.elapsed_s);
    }
  };
  const std::vector<double> init(static_cast<std::size_t>(2 * cfg.K + 1), 0.0);
  OptimizeSummary out;
  out.result = optim::optimize(objective, init, cfg.optimizer, on_iter);
  out.params = field::ControlParams::from_flat(out.result.params, cfg.K, cfg.wavenumber_unit);
  switch (out.result.status) {
    case optim::Status::Converged: out.exit_code = 0; break;
    case optim::Status::MaxIterations: out.exit_code = 2; break;
    case optim::Status::NumericAbort: out.exit_code = 1; break;
  }
  if (write) {
    write_resolved_config(cfg);
    io::write_params(cfg.out_dir / "params.txt", out.params);
    io::write_run_log(cfg.out_dir / "run_log.csv", out.result.records);
    {
      std::ofstream s(cfg.out_dir / "run_summary.txt");
      s << "status = " << optim::status_name(out.result.status) << "\n"
        << "iterations = " << out.result.records.size() << "\n"
        << "best_iter = " << out.result.best_iter << "\n"
        << "best_loss = " << io::format_double(out.result.best_loss) << "\n"
        << "eta0 = " << io::format_double(cfg.optimizer.eta0) << "\n"
        << "kappa = " << io::format_double(cfg.optimizer.resolved_kappa()) << "\n"
        << "gradient = " << (cfg.gradient == config::GradientMode::Adjoint ? "adjoint" : "exact") << "\n";
      if (!out.result.message.empty()) s << "message = " << out.result.message << "\n";
    }
    run_moments(cfg, out.params, true);
  }
  return out;
}

std::vector<Check> property_suite() {
  std::vector<Check> checks;
  auto add = [&](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };

  // Orthonormality under Gauss-Hermite quadrature.
  {
    const int N = 31;
    const auto q = hermite::VelocityQuadrature::gauss_hermite(64);
    const auto w = q.gaussian_weights();
    const auto table = hermite::htilde_table(q.nodes, N);
    const std::size_t nq = q.size();
    double err = 0.0;
    for (int m = 0; m <= N; ++m) {
      for (int n = 0; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t l = 0; l < nq; ++l) s += w[l] * table[m * nq + l] * table[n * nq + l];
        err = std::max(err, std::abs(s - (m == n ? 1.0 : 0.0)));
      }
    }
    add("hermite orthonormality (orders <= 31, 64-point Gauss-Hermite)", err <= 1e-8, "max error " + sci(err));
  }

  // Derivative form vs three-term form of the recurrence.
  {
    double err = 0.0;
    std::vector<double> h(33), d(33);
    for (int i = 0; i <= 1600; ++i) {
      const double v = -8.0 + 0.01 * i;
      hermite::htilde_with_derivative(v, h, d);
      for (int n = 0; n <= 31; ++n) {
        const double lhs = std::sqrt(n + 1.0) * h[n + 1];
        const double rhs = v * h[n] - d[n];
        const double scale = std::abs(v * h[n]) + std::abs(d[n]) + 1e-300;
        err = std::max(err, std::abs(lhs - rhs) / scale);
      }
    }
    add("hermite recursions agree (orders <= 31, |v| <= 8)", err <= 1e-12, "max relative error " + sci(err));
  }

  // Eigenvalues of A_N against bisected roots of He_{N+1}; zero eigenvalue parity.
  {
    double err = 0.0;
    bool parity_ok = true;
    for (int N = 1; N <= 31; ++N) {
      const auto sys = moments::build_system(N);
      std::vector<double> h(static_cast<std::size_t>(N) + 2);
      auto p = [&](double v) {
        hermite::htilde_all(v, h);
        return h.back();
      };
      std::vector<double> roots;
      const double bound = std::sqrt(4.0 * N + 6.0) + 1.0;
      const double step = 1e-3;
      double a = -bound, fa = p(a);
      while (a < bound) {
        double b = a + step, fb = p(b);
        if (fa == 0.0) {
          roots.push_back(a);
        } else if (fa * fb < 0.0) {
          double lo = a, hi = b, flo = fa;
          for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi), fm = p(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
      }
      if (roots.size() != sys.eigenvalues.size()) {
        err = 1.0;
        break;
      }
      double min_abs = 1e300;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        err = std::max(err, std::abs(roots[i] - sys.eigenvalues[i]));
        min_abs = std::min(min_abs, std::abs(sys.eigenvalues[i]));
      }
      const bool has_zero = min_abs < 1e-12;
      parity_ok = parity_ok && (has_zero == (N % 2 == 0));
    }
    add("eigenvalues of A_N equal roots of He_{N+1} (N <= 31)", err <= 1e-8, "max difference " + sci(err));
    add("zero eigenvalue iff N even (N <= 31)", parity_ok, parity_ok ? "holds" : "violated");
  }

  const field::Grid1D grid(10.0 * std::numbers::pi, 100, field::VelocityAxis{});
  const auto two = hermite::Equilibrium::two_stream(2.4);
  const kinetic::Perturbation cos_pert{kinetic::Perturbation::Shape::Cos, 0.2, 1e-3};
  const std::vector<double> zeroH(static_cast<std::size_t>(grid.nx), 0.0);

  // Mass conservation in both solvers.
  {
    const int N = 30;
    const auto sys = moments::build_system(N);
    const auto m0 = moments::project_initial(kinetic::initial_distribution(two, cos_pert), N, grid);
    moments::IntegrateOptions opts;
    opts.keep_states = true;
    opts.keep_steps = false;
    const auto traj = moments::integrate(m0, sys, grid, zeroH, 30.0, 3.0, opts);
    const double base = moments::total_mass(m0, grid);
    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, std::abs(moments::total_mass(s, grid) / base - 1.0));
    add("moment solver mass drift (two-stream, N = 30, T = 30)", drift <= 1e-10, "max relative drift " + sci(drift));

    const auto maxw = hermite::Equilibrium::maxwellian();
    const auto f0 = kinetic::sample(kinetic::initial_distribution(maxw, {kinetic::Perturbation::Shape::Cos, 0.2, 0.05}), grid);
    kinetic::KineticSolver ks(grid);
    const double kbase = kinetic::total_mass(f0);
    double kdrift = 0.0;
    ks.integrate(f0, zeroH, 30.0, 0.1, [&](const kinetic::PhaseSpaceField& f, std::size_t) {
      kdrift = std::max(kdrift, std::abs(kinetic::total_mass(f) / kbase - 1.0));
    });
    add("kinetic solver mass drift (Maxwellian, T = 30)", kdrift <= 1e-10, "max relative drift " + sci(kdrift));
  }

  // L2 bound on random coefficient perturbations.
  {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int N = 30;
    const auto mbar = diag::equilibrium_moments(two, grid, N);
    double worst = -1e300;
    for (int trial = 0; trial < 20; ++trial) {
      moments::MomentField m(N, grid.nx);
      const double amp = std::pow(10.0, -4.0 + 0.2 * trial);
      for (int n = 0; n <= N; ++n) {
        for (int j = 0; j < grid.nx; ++j) m.at(n, j) = mbar[static_cast<std::size_t>(n)] + amp * nd(rng);
      }
      const auto b = diag::l2_bound_check(m, two, grid);
      worst = std::max(worst, (b.lhs - b.rhs) / std::max(b.rhs, 1e-300));
    }
    add("L2 bound lhs <= rhs (20 random perturbations, N = 30)", worst <= 1e-6,
        "max (lhs - rhs) / rhs = " + sci(worst));
  }

  // Equilibrium fixed points.
  {
    const int N = 30;
    const auto sys = moments::build_system(N);
    const auto mbar = diag::equilibrium_moments(two, grid, N);
    moments::MomentField m(N, grid.nx);
    for (int n = 0; n <= N; ++n) {
      for (int j = 0; j < grid.nx; ++j) m.at(n, j) = mbar[static_cast<std::size_t>(n)];
    }
    const auto traj = moments::integrate(m, sys, grid, zeroH, 30.0, 3.0, {1.0, false, false, 1e-6});
    double dev = 0.0;
    for (int n = 0; n <= N; ++n) {
      for (int j = 0; j < grid.nx; ++j) dev = std::max(dev, std::abs(traj.final_state.at(n, j) - mbar[static_cast<std::size_t>(n)]));
    }
    add("moment equilibrium fixed point (two-stream, N = 30, T = 30)", dev <= 1e-12,
        "max deviation " + sci(dev));

    const auto f0 = kinetic::sample([&](double, double v) { return two(v); }, grid);
    kinetic::KineticSolver ks(grid);
    const auto fT = ks.integrate(f0, zeroH, 30.0, 0.1);
    double kdev = 0.0;
    for (std::size_t i = 0; i < fT.values.size(); ++i) kdev = std::max(kdev, std::abs(fT.values[i] - f0.values[i]));
    add("kinetic equilibrium fixed point (two-stream, T = 30)", kdev <= 1e-12, "max deviation " + sci(kdev));
  }
  return checks;
}

}  // namespace vpmc::experiment
