#include "ffdyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ffdyn {

namespace {

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a9161", "#8a5fb0",
                          "#c98a2b", "#4fb3bf", "#74655d", "#aa3fa0"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool ok() const { return lo <= hi; }
  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// 1-2-5 tick spacing covering the range with ~n ticks.
std::vector<double> linear_ticks(double lo, double hi, int n) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, n);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 0.5 * step; t += step) ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  const int e0 = static_cast<int>(std::floor(std::log10(lo)));
  const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
  for (int e = e0; e <= e1; ++e) {
    const double v = std::pow(10.0, e);
    if (v >= lo / 1.0001 && v <= hi * 1.0001) ticks.push_back(v);
  }
  if (ticks.empty()) ticks.push_back(lo);
  return ticks;
}

void render_one(std::ostringstream& out, const PlotSpec& spec,
                const std::vector<PlotSeries>& series, double ox, double oy,
                bool with_legend) {
  const double ml = 62, mr = 14, mt = 30, mb = 44;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  Range rx, ry;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (spec.log_y && !(s.y[i] > 0.0)) continue;
      rx.widen(s.x[i]);
      ry.widen(s.y[i]);
    }
  if (!rx.ok() || !ry.ok()) throw std::runtime_error("svg chart: no drawable points");
  if (rx.hi == rx.lo) {
    rx.lo -= 0.5;
    rx.hi += 0.5;
  }
  if (ry.hi == ry.lo) {
    if (spec.log_y) {
      ry.lo *= 0.5;
      ry.hi *= 2.0;
    } else {
      ry.lo -= 0.5;
      ry.hi += 0.5;
    }
  } else if (!spec.log_y) {
    const double pad = 0.04 * (ry.hi - ry.lo);
    ry.lo -= pad;
    ry.hi += pad;
  }

  auto sx = [&](double v) { return ox + ml + pw * (v - rx.lo) / (rx.hi - rx.lo); };
  auto sy = [&](double v) {
    const double t = spec.log_y ? (std::log10(v) - std::log10(ry.lo)) /
                                      (std::log10(ry.hi) - std::log10(ry.lo))
                                : (v - ry.lo) / (ry.hi - ry.lo);
    return oy + mt + ph * (1.0 - t);
  };

  out << "<g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"" << fmt(ox + ml) << "\" y=\"" << fmt(oy + mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"#ffffff\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  const auto xts = linear_ticks(rx.lo, rx.hi, 7);
  for (double t : xts) {
    const double px = sx(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(oy + mt + ph) << "\" x2=\""
        << fmt(px) << "\" y2=\"" << fmt(oy + mt + ph + 4) << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(oy + mt + ph + 16)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  const auto yts = spec.log_y ? log_ticks(ry.lo, ry.hi) : linear_ticks(ry.lo, ry.hi, 6);
  for (double t : yts) {
    const double py = sy(t);
    out << "<line x1=\"" << fmt(ox + ml - 4) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(ox + ml) << "\" y2=\"" << fmt(py) << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << fmt(ox + ml - 7) << "\" y=\"" << fmt(py + 3.5)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    out << "<line x1=\"" << fmt(ox + ml) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(ox + ml + pw) << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.6\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const bool drawable = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) &&
                            (!spec.log_y || s.y[i] > 0.0);
      if (!drawable) {
        pen_down = false;
        continue;
      }
      path += pen_down ? 'L' : 'M';
      path += fmt(sx(s.x[i]));
      path += ' ';
      path += fmt(sy(s.y[i]));
      pen_down = true;
    }
    if (!path.empty())
      out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.4\"/>\n";
  }

  out << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"" << fmt(oy + 16)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(spec.title)
      << "</text>\n";
  out << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"" << fmt(oy + mt + ph + 32)
      << "\" text-anchor=\"middle\">" << escape_xml(spec.xlabel) << "</text>\n";
  out << "<text x=\"" << fmt(ox + 14) << "\" y=\"" << fmt(oy + mt + ph / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt(ox + 14) << ' '
      << fmt(oy + mt + ph / 2) << ")\">" << escape_xml(spec.ylabel) << "</text>\n";

  if (with_legend) {
    double ly = oy + mt + 8;
    for (std::size_t si = 0; si < series.size(); ++si) {
      if (series[si].label.empty()) continue;
      const char* color = kPalette[si % kPaletteSize];
      out << "<line x1=\"" << fmt(ox + ml + pw - 118) << "\" y1=\"" << fmt(ly)
          << "\" x2=\"" << fmt(ox + ml + pw - 100) << "\" y2=\"" << fmt(ly)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << fmt(ox + ml + pw - 95) << "\" y=\"" << fmt(ly + 3.5) << "\">"
          << escape_xml(series[si].label) << "</text>\n";
      ly += 14;
    }
  }
  out << "</g>\n";
}

}  // namespace

std::string render_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' '
      << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  render_one(out, spec, series, 0.0, 0.0, true);
  out << "</svg>\n";
  return out.str();
}

void write_chart(const std::filesystem::path& path, const PlotSpec& spec,
                 const std::vector<PlotSeries>& series) {
  const std::string body = render_chart(spec, series);  // throws before the file exists
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

std::string render_panel_grid(const std::string& title, const std::vector<PlotSpec>& specs,
                              const std::vector<std::vector<PlotSeries>>& series, int cols) {
  if (specs.empty() || specs.size() != series.size())
    throw std::invalid_argument("panel grid: specs/series mismatch");
  cols = std::max(1, cols);
  const int rows = static_cast<int>((specs.size() + cols - 1) / cols);
  const int pw = specs.front().width, ph = specs.front().height;
  const int header = title.empty() ? 0 : 26;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pw * cols
      << "\" height=\"" << ph * rows + header << "\" viewBox=\"0 0 " << pw * cols << ' '
      << ph * rows + header << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (header)
    out << "<text x=\"" << pw * cols / 2 << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-family=\"Helvetica,Arial,sans-serif\" font-size=\"15\">"
        << escape_xml(title) << "</text>\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const double ox = static_cast<double>(static_cast<int>(i) % cols * pw);
    const double oy = static_cast<double>(static_cast<int>(i) / cols * ph + header);
    render_one(out, specs[i], series[i], ox, oy, i == 0);
  }
  out << "</svg>\n";
  return out.str();
}

void write_panel_grid(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSpec>& specs,
                      const std::vector<std::vector<PlotSeries>>& series, int cols) {
  const std::string body = render_panel_grid(title, specs, series, cols);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

}  // namespace ffdyn
