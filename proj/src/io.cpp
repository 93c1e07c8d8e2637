#include "vpmc/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "vpmc/errors.hpp"

namespace vpmc::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

constexpr char kMomMagic[6] = {'V', 'P', 'M', 'O', 'M', '1'};
constexpr char kKinMagic[6] = {'V', 'P', 'K', 'I', 'N', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const fs::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError(path.string(), 0, "truncated binary file");
  return v;
}

void check_magic(std::ifstream& in, const char (&magic)[6], const fs::path& path) {
  char buf[6];
  in.read(buf, 6);
  if (!in || std::memcmp(buf, magic, 6) != 0) {
    throw ParseError(path.string(), 0, std::string("bad magic, expected ") + std::string(magic, 6));
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_moments_csv(const fs::path& path, const moments::MomentField& m, const field::Grid1D& grid) {
  auto out = open_out(path);
  out << "x";
  for (int n = 0; n <= m.order; ++n) out << ",m" << n;
  out << "\n";
  for (int j = 0; j < m.nx; ++j) {
    out << format_double(grid.x(j));
    for (int n = 0; n <= m.order; ++n) out << ',' << format_double(m.at(n, j));
    out << "\n";
  }
}

void write_phase_csv(const fs::path& path, const kinetic::PhaseSpaceField& f) {
  auto out = open_out(path);
  const auto& axis = f.grid.v_axis();
  out << "x,v,f\n";
  for (int j = 0; j < f.nx(); ++j) {
    const std::string x = format_double(f.grid.x(j));
    for (int l = 0; l < axis.nv; ++l) {
      out << x << ',' << format_double(axis.v(l)) << ',' << format_double(f.at(j, l)) << "\n";
    }
  }
}

void write_timeseries_csv(const fs::path& path, const std::vector<diag::TimeSeriesRecord>& rows) {
  auto out = open_out(path);
  out << "t,J,E_energy,moment_misfit\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.J) << ',' << format_double(r.E_energy) << ','
        << format_double(r.moment_misfit) << "\n";
  }
}

void write_run_log(const fs::path& path, const std::vector<optim::IterationRecord>& rows) {
  auto out = open_out(path);
  out << "iter,loss,grad_inf_norm,elapsed_s\n";
  for (const auto& r : rows) {
    out << r.iter << ',' << format_double(r.loss) << ',' << format_double(r.grad_inf_norm) << ','
        << format_double(r.elapsed_s) << "\n";
  }
}

void write_control_csv(const fs::path& path, const field::ControlParams& p, const field::Grid1D& grid) {
  const auto x = grid.nodes();
  const auto H = field::eval_control(p, x);
  auto out = open_out(path);
  out << "x,H\n";
  for (std::size_t j = 0; j < x.size(); ++j) out << format_double(x[j]) << ',' << format_double(H[j]) << "\n";
}

void write_params(const fs::path& path, const field::ControlParams& p) {
  auto out = open_out(path);
  out << "k,type,value\n";
  for (std::size_t k = 0; k < p.alpha.size(); ++k) out << k + 1 << ",sin," << format_double(p.alpha[k]) << "\n";
  for (std::size_t k = 0; k < p.beta.size(); ++k) out << k << ",cos," << format_double(p.beta[k]) << "\n";
}

field::ControlParams read_params(const fs::path& path, double wavenumber_unit) {
  auto in = open_in(path);
  std::map<int, double> sin_c, cos_c;
  std::string line;
  std::size_t lineno = 0;
  int K = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t, ',');
    if (lineno == 1 && !cells.empty() && cells[0] == "k") continue;
    if (cells.size() != 3) throw ParseError(path.string(), lineno, "expected k,type,value");
    double kd = 0.0, v = 0.0;
    if (!parse_number(cells[0], kd) || kd != std::floor(kd) || kd < 0 || kd > 1e6) {
      throw ParseError(path.string(), lineno, "bad mode index '" + cells[0] + "'");
    }
    if (!parse_number(cells[2], v) || !std::isfinite(v)) {
      throw ParseError(path.string(), lineno, "bad value '" + cells[2] + "'");
    }
    const int k = static_cast<int>(kd);
    if (cells[1] == "sin") {
      if (k < 1) throw ParseError(path.string(), lineno, "sin modes start at k = 1");
      if (!sin_c.emplace(k, v).second) throw ParseError(path.string(), lineno, "duplicate sin mode");
    } else if (cells[1] == "cos") {
      if (!cos_c.emplace(k, v).second) throw ParseError(path.string(), lineno, "duplicate cos mode");
    } else {
      throw ParseError(path.string(), lineno, "type must be sin or cos, got '" + cells[1] + "'");
    }
    K = std::max(K, k);
  }
  auto p = field::ControlParams::zeros(K, wavenumber_unit);
  for (auto [k, v] : sin_c) p.alpha[static_cast<std::size_t>(k - 1)] = v;
  for (auto [k, v] : cos_c) p.beta[static_cast<std::size_t>(k)] = v;
  return p;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ArgumentError("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tl = trim(line);
    if (tl.empty()) continue;
    auto cells = split(tl, ',');
    if (!have_header) {
      for (const auto& c : cells) {
        if (c.empty()) throw ParseError(source, lineno, "empty column name in header");
      }
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_number(cells[i], row[i])) {
        throw ParseError(source, lineno, "field '" + t.header[i] + "' is not a number: '" + cells[i] + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError(source, 0, "missing header row");
  return t;
}

CsvTable read_csv(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

void write_moment_snapshots(const fs::path& path, const std::vector<moments::MomentField>& snaps,
                            const field::Grid1D& grid) {
  auto out = open_out(path, true);
  const std::uint64_t order = snaps.empty() ? 0 : static_cast<std::uint64_t>(snaps.front().order);
  out.write(kMomMagic, 6);
  put<std::uint64_t>(out, snaps.size());
  put<std::uint64_t>(out, snaps.empty() ? 0 : order + 1);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(grid.nx));
  put<double>(out, grid.length);
  for (const auto& m : snaps) {
    if (static_cast<std::uint64_t>(m.order) != order || m.nx != grid.nx) {
      throw ArgumentError("write_moment_snapshots: snapshots differ in shape");
    }
    put<double>(out, m.time);
    out.write(reinterpret_cast<const char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)));
  }
}

std::vector<moments::MomentField> read_moment_snapshots(const fs::path& path, field::Grid1D* grid) {
  auto in = open_in(path, true);
  check_magic(in, kMomMagic, path);
  const auto n_times = get<std::uint64_t>(in, path);
  const auto n_mom = get<std::uint64_t>(in, path);
  const auto nx = get<std::uint64_t>(in, path);
  const auto L = get<double>(in, path);
  if (nx > (1u << 24) || n_mom > (1u << 16) || (n_times > 0 && n_mom == 0)) {
    throw ParseError(path.string(), 0, "implausible dimensions");
  }
  if (grid) *grid = field::Grid1D(L, static_cast<int>(nx));
  std::vector<moments::MomentField> out;
  for (std::uint64_t s = 0; s < n_times; ++s) {
    moments::MomentField m(static_cast<int>(n_mom) - 1, static_cast<int>(nx));
    m.time = get<double>(in, path);
    in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)));
    if (!in) throw ParseError(path.string(), 0, "truncated binary file");
    out.push_back(std::move(m));
  }
  return out;
}

void write_kinetic_snapshots(const fs::path& path, const std::vector<kinetic::PhaseSpaceField>& snaps) {
  auto out = open_out(path, true);
  out.write(kKinMagic, 6);
  put<std::uint64_t>(out, snaps.size());
  if (snaps.empty()) {
    put<std::uint64_t>(out, 0);
    put<std::uint64_t>(out, 0);
    put<double>(out, 0.0);
    put<double>(out, 0.0);
    put<double>(out, 0.0);
    return;
  }
  const auto& g = snaps.front().grid;
  const auto& axis = g.v_axis();
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.nx));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(axis.nv));
  put<double>(out, g.length);
  put<double>(out, axis.vmin);
  put<double>(out, axis.vmax);
  for (const auto& f : snaps) {
    if (f.values.size() != static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(axis.nv)) {
      throw ArgumentError("write_kinetic_snapshots: snapshots differ in shape");
    }
    put<double>(out, f.time);
    out.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  }
}

std::vector<kinetic::PhaseSpaceField> read_kinetic_snapshots(const fs::path& path) {
  auto in = open_in(path, true);
  check_magic(in, kKinMagic, path);
  const auto n_times = get<std::uint64_t>(in, path);
  const auto nx = get<std::uint64_t>(in, path);
  const auto nv = get<std::uint64_t>(in, path);
  const auto L = get<double>(in, path);
  const auto vmin = get<double>(in, path);
  const auto vmax = get<double>(in, path);
  std::vector<kinetic::PhaseSpaceField> out;
  if (n_times == 0) return out;
  if (nx > (1u << 20) || nv > (1u << 20)) throw ParseError(path.string(), 0, "implausible dimensions");
  const field::Grid1D g(L, static_cast<int>(nx), field::VelocityAxis{vmin, vmax, static_cast<int>(nv)});
  for (std::uint64_t s = 0; s < n_times; ++s) {
    kinetic::PhaseSpaceField f(g);
    f.time = get<double>(in, path);
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw ParseError(path.string(), 0, "truncated binary file");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace vpmc::io
