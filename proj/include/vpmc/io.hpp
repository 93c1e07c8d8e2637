#pragma once

// File formats (see docs/FORMATS.md). Doubles are written with 17 significant
// digits so that identical runs produce identical bytes.

#include <filesystem>
#include <string>
#include <vector>

#include "vpmc/diag.hpp"
#include "vpmc/field.hpp"
#include "vpmc/kinetic.hpp"
#include "vpmc/moment_solver.hpp"
#include "vpmc/optim.hpp"

namespace vpmc::io {

std::string format_double(double x);

void write_moments_csv(const std::filesystem::path& path, const moments::MomentField& m,
                       const field::Grid1D& grid);
void write_phase_csv(const std::filesystem::path& path, const kinetic::PhaseSpaceField& f);
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<diag::TimeSeriesRecord>& rows);
void write_run_log(const std::filesystem::path& path, const std::vector<optim::IterationRecord>& rows);
void write_control_csv(const std::filesystem::path& path, const field::ControlParams& p,
                       const field::Grid1D& grid);

// Control coefficients as `k,type,value` lines, type in {sin, cos}.
void write_params(const std::filesystem::path& path, const field::ControlParams& p);
// Throws ParseError (with line number) on malformed input. K is the largest
// index present; missing coefficients are zero.
field::ControlParams read_params(const std::filesystem::path& path, double wavenumber_unit = 0.2);

// Generic CSV table with a header row and numeric cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column index by name; throws ArgumentError if absent.
  std::size_t column(const std::string& name) const;
};

// Throws ParseError with the offending line number.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& source = "<csv>");

// Binary snapshot series.
//   VPMOM1: magic[6], u64 n_times, u64 n_moments, u64 nx, f64 L, then per time f64 t and
//           n_moments * nx f64 values (row-major, moment-major).
//   VPKIN1: magic[6], u64 n_times, u64 nx, u64 nv, f64 L, f64 vmin, f64 vmax, then per time
//           f64 t and nx * nv f64 values (x-major).
// Little-endian host layout.
void write_moment_snapshots(const std::filesystem::path& path, const std::vector<moments::MomentField>& snaps,
                            const field::Grid1D& grid);
std::vector<moments::MomentField> read_moment_snapshots(const std::filesystem::path& path, field::Grid1D* grid = nullptr);

void write_kinetic_snapshots(const std::filesystem::path& path, const std::vector<kinetic::PhaseSpaceField>& snaps);
std::vector<kinetic::PhaseSpaceField> read_kinetic_snapshots(const std::filesystem::path& path);

}  // namespace vpmc::io
