// vpmc: command-line front end for the moment-control experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vpmc/config.hpp"
#include "vpmc/errors.hpp"
#include "vpmc/experiment.hpp"
#include "vpmc/io.hpp"
#include "vpmc/simd.hpp"
#include "vpmc/svg.hpp"

namespace fs = std::filesystem;
using namespace vpmc;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitConfig = 3;

struct CommonOptions {
  std::optional<std::string> preset;
  std::optional<fs::path> config;
  std::optional<fs::path> out;
  std::optional<fs::path> params;
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_params) {
  app->add_option("--preset", o.preset, "built-in scenario")->check(CLI::IsMember(config::preset_names()));
  app->add_option("--config", o.config, "key = value configuration file");
  app->add_option("--out", o.out, "output directory (overrides output.dir)");
  app->add_option("--set", o.overrides, "override, key=value (repeatable)");
  if (with_params) app->add_option("--params", o.params, "control coefficients file (k,type,value)");
  app->add_flag("-q,--quiet", o.quiet, "suppress progress output");
}

config::RunConfig resolve(const CommonOptions& o) {
  auto cfg = config::resolve(o.preset, o.config, o.overrides);
  if (o.out) cfg.out_dir = *o.out;
  return cfg;
}

field::ControlParams load_params(const CommonOptions& o, const config::RunConfig& cfg) {
  if (!o.params) return field::ControlParams::zeros(cfg.K, cfg.wavenumber_unit);
  return io::read_params(*o.params, cfg.wavenumber_unit);
}

void print_record(const char* label, const diag::TimeSeriesRecord& r) {
  std::printf("%s t = %g  J = %.6e  E_energy = %.6e  moment_misfit = %.6e\n", label, r.t, r.J, r.E_energy,
              r.moment_misfit);
}

int cmd_solve_vp(const CommonOptions& o, bool evaluate) {
  const auto cfg = resolve(o);
  const auto params = load_params(o, cfg);
  const auto s = experiment::run_kinetic(cfg, params, true);
  print_record("kinetic", s.at_T);
  if (s.at_extend) print_record("kinetic", *s.at_extend);
  if (evaluate) std::printf("artifacts in %s\n", cfg.out_dir.string().c_str());
  return 0;
}

int cmd_solve_moments(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto params = load_params(o, cfg);
  const auto s = experiment::run_moments(cfg, params, true);
  if (!s.series.empty()) print_record("moments", s.series.back());
  std::printf("loss = %.6e\n", s.loss);
  return 0;
}

int cmd_optimize(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto s = experiment::run_optimize(cfg, true, !o.quiet);
  std::printf("status = %s  iterations = %zu  best_loss = %.6e (iter %zu)\n",
              optim::status_name(s.result.status).c_str(), s.result.records.size(), s.result.best_loss,
              s.result.best_iter);
  if (!s.result.message.empty()) std::printf("%s\n", s.result.message.c_str());
  std::printf("params written to %s\n", (cfg.out_dir / "params.txt").string().c_str());
  return s.exit_code;
}

int cmd_verify() {
  std::printf("simd kernels: %s\n", std::string(simd::isa_name(simd::active_isa())).c_str());
  bool all = true;
  for (const auto& c : experiment::property_suite()) {
    std::printf("%s  %s  (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    all = all && c.pass;
  }
  return all ? 0 : kExitNumeric;
}

// --- plot ------------------------------------------------------------------

enum class Schema { TimeSeries, RunLog, Control, Moments, Phase };

Schema detect(const io::CsvTable& t, const std::string& source) {
  const auto& h = t.header;
  auto is = [&](std::initializer_list<const char*> names) {
    if (h.size() != names.size()) return false;
    std::size_t i = 0;
    for (const char* n : names) {
      if (h[i++] != n) return false;
    }
    return true;
  };
  if (is({"t", "J", "E_energy", "moment_misfit"})) return Schema::TimeSeries;
  if (is({"iter", "loss", "grad_inf_norm", "elapsed_s"})) return Schema::RunLog;
  if (is({"x", "H"})) return Schema::Control;
  if (is({"x", "v", "f"})) return Schema::Phase;
  if (h.size() >= 2 && h[0] == "x" && h[1] == "m0") {
    for (std::size_t i = 1; i < h.size(); ++i) {
      if (h[i] != "m" + std::to_string(i - 1)) throw ParseError(source, 1, "unrecognized moment column '" + h[i] + "'");
    }
    return Schema::Moments;
  }
  throw ParseError(source, 1, "header matches no documented CSV schema");
}

std::vector<double> column(const io::CsvTable& t, const std::string& name) {
  const auto c = t.column(name);
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(r[c]);
  return out;
}

struct PlotArgs {
  std::vector<fs::path> inputs;
  std::vector<std::string> labels;
  fs::path output;
  std::string column;
  std::string title;
};

int cmd_plot(const PlotArgs& a) {
  std::vector<io::CsvTable> tables;
  std::vector<Schema> schemas;
  for (const auto& p : a.inputs) {
    tables.push_back(io::read_csv(p));
    schemas.push_back(detect(tables.back(), p.string()));
  }
  for (std::size_t i = 1; i < schemas.size(); ++i) {
    if (schemas[i] != schemas[0]) throw ArgumentError("plot: all inputs must share one schema");
  }
  auto label = [&](std::size_t i) { return i < a.labels.size() ? a.labels[i] : a.inputs[i].stem().string(); };

  svg::PlotOptions opts;
  opts.title = a.title;
  std::string doc;
  switch (schemas[0]) {
    case Schema::TimeSeries:
    case Schema::RunLog: {
      const bool ts = schemas[0] == Schema::TimeSeries;
      const std::string xcol = ts ? "t" : "iter";
      const std::string ycol = a.column.empty() ? (ts ? "J" : "loss") : a.column;
      opts.xlabel = xcol;
      opts.ylabel = ycol;
      opts.log_y = true;
      std::vector<svg::Series> series;
      for (std::size_t i = 0; i < tables.size(); ++i) {
        series.push_back({label(i), column(tables[i], xcol), column(tables[i], ycol)});
      }
      doc = svg::line_plot(series, opts);
      break;
    }
    case Schema::Control:
    case Schema::Moments: {
      const std::string ycol = a.column.empty() ? (schemas[0] == Schema::Control ? "H" : "m0") : a.column;
      opts.xlabel = "x";
      opts.ylabel = ycol;
      std::vector<svg::Series> series;
      for (std::size_t i = 0; i < tables.size(); ++i) {
        series.push_back({label(i), column(tables[i], "x"), column(tables[i], ycol)});
      }
      doc = svg::line_plot(series, opts);
      break;
    }
    case Schema::Phase: {
      if (tables.size() != 1) throw ArgumentError("plot: a heatmap takes exactly one input");
      const auto x = column(tables[0], "x"), v = column(tables[0], "v"), f = column(tables[0], "f");
      if (x.empty()) throw ParseError(a.inputs[0].string(), 2, "phase-space table has no rows");
      std::size_t nv = 1;
      while (nv < x.size() && x[nv] == x[0]) ++nv;
      if (x.size() % nv != 0) throw ParseError(a.inputs[0].string(), 1, "phase-space rows do not form a grid");
      const std::size_t nx = x.size() / nv;
      // transpose to v rows so velocity runs up the y axis
      std::vector<double> grid(x.size());
      for (std::size_t j = 0; j < nx; ++j) {
        for (std::size_t l = 0; l < nv; ++l) grid[l * nx + j] = f[j * nv + l];
      }
      const double dx = nx > 1 ? x[nv] - x[0] : 1.0;
      const double dv = nv > 1 ? v[1] - v[0] : 1.0;
      opts.xlabel = "x";
      opts.ylabel = "v";
      doc = svg::heatmap(grid, static_cast<int>(nx), static_cast<int>(nv), x[0], x.back() + dx, v[0] - 0.5 * dv,
                         v[nv - 1] + 0.5 * dv, opts);
      break;
    }
  }
  if (a.output.has_parent_path()) fs::create_directories(a.output.parent_path());
  std::ofstream(a.output, std::ios::binary) << doc;
  std::printf("wrote %s\n", a.output.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-based optimal control of the 1D Vlasov-Poisson system"};
  app.require_subcommand(1);

  CommonOptions vp, mom, opt, ev;
  add_common(app.add_subcommand("solve-vp", "kinetic run with a fixed control"), vp, true);
  add_common(app.add_subcommand("solve-moments", "moment-system run with a fixed control"), mom, true);
  add_common(app.add_subcommand("optimize", "optimize the control on the moment system"), opt, false);
  auto* evaluate = app.add_subcommand("evaluate", "kinetic evaluation of an optimized control");
  add_common(evaluate, ev, true);
  evaluate->get_option("--params")->required();

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "render CSV outputs to SVG");
  plot->add_option("--input", pa.inputs, "CSV file (repeatable; overlays share a schema)")->required()->check(CLI::ExistingFile);
  plot->add_option("--label", pa.labels, "legend label per input");
  plot->add_option("--output", pa.output, "SVG path")->required();
  plot->add_option("--column", pa.column, "y column (defaults per schema)");
  plot->add_option("--title", pa.title, "plot title");

  app.add_subcommand("verify", "run the property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("solve-vp")) return cmd_solve_vp(vp, false);
    if (app.got_subcommand("solve-moments")) return cmd_solve_moments(mom);
    if (app.got_subcommand("optimize")) return cmd_optimize(opt);
    if (app.got_subcommand("evaluate")) return cmd_solve_vp(ev, true);
    if (app.got_subcommand("plot")) return cmd_plot(pa);
    if (app.got_subcommand("verify")) return cmd_verify();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
