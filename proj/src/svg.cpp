#include "vpmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "vpmc/errors.hpp"

namespace vpmc::svg {

namespace {

constexpr int kLeft = 70, kRight = 20, kTop = 36, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;  // data range (y in log10 units when log_y)
  int w, h;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (w - kLeft - kRight); }
  double py(double y) const { return h - kBottom - (y - y0) / (y1 - y0) * (h - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostringstream& o, const Frame& f, const PlotOptions& opts) {
  o << "<rect x=\"0\" y=\"0\" width=\"" << f.w << "\" height=\"" << f.h << "\" fill=\"white\"/>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << f.w - kLeft - kRight << "\" height=\""
    << f.h - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    o << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << f.h - kBottom + 16
      << "\" font-size=\"11\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    const double label = opts.log_y ? std::pow(10.0, yv) : yv;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.py(yv) + 4)
      << "\" font-size=\"11\" text-anchor=\"end\">" << tick(label) << "</text>\n";
  }
  o << "<text x=\"" << f.w / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" << escape(opts.title)
    << "</text>\n";
  o << "<text x=\"" << f.w / 2 << "\" y=\"" << f.h - 10 << "\" font-size=\"12\" text-anchor=\"middle\">"
    << escape(opts.xlabel) << "</text>\n";
  o << "<text x=\"14\" y=\"" << f.h / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << f.h / 2 << ")\">" << escape(opts.ylabel) << "</text>\n";
}

std::string header(int w, int h) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
    << w << " " << h << "\" font-family=\"sans-serif\">\n";
  return o.str();
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto yval = [&](double y) { return opts.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!opts.log_y || y > 0.0); };
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ArgumentError("svg: series '" + s.label + "' has mismatched x/y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yval(s.y[i]));
      y1 = std::max(y1, yval(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0;
    x1 = 1.0;
    y0 = 0.0;
    y1 = 1.0;
  }
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1, opts.width, opts.height};

  std::ostringstream o;
  o << header(f.w, f.h);
  axes(o, f, opts);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(f.px(s.x[i])) + "," + num(f.py(yval(s.y[i])));
    }
    if (!pts.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    }
    const int ly = kTop + 14 + 16 * static_cast<int>(k);
    o << "<line x1=\"" << f.w - kRight - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << f.w - kRight - 130
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << f.w - kRight - 125 << "\" y=\"" << ly << "\" font-size=\"11\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap(const std::vector<double>& values, int nx, int ny, double x0, double x1, double y0, double y1,
                    const PlotOptions& opts) {
  if (nx <= 0 || ny <= 0 || values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw ArgumentError("svg: heatmap size mismatch");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  widen(lo, hi);
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1, opts.width, opts.height};
  PlotOptions plain = opts;
  plain.log_y = false;

  std::ostringstream o;
  o << header(f.w, f.h);
  axes(o, f, plain);
  const double cw = (f.px(x1) - f.px(x0)) / nx, ch = (f.py(y0) - f.py(y1)) / ny;
  for (int r = 0; r < ny; ++r) {
    for (int c = 0; c < nx; ++c) {
      const double v = values[static_cast<std::size_t>(r) * nx + c];
      const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
      // blue -> yellow ramp
      const int red = static_cast<int>(std::lround(255 * t));
      const int green = static_cast<int>(std::lround(40 + 200 * t));
      const int blue = static_cast<int>(std::lround(140 * (1.0 - t)));
      char color[8];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", red, green, blue);
      o << "<rect x=\"" << num(f.px(x0) + c * cw) << "\" y=\"" << num(f.py(y0) - (r + 1) * ch) << "\" width=\""
        << num(cw + 0.05) << "\" height=\"" << num(ch + 0.05) << "\" fill=\"" << color << "\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace vpmc::svg
