#include "cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scaledyn::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1-2-5 steps giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  if (spec.x.empty()) throw std::invalid_argument("plot needs at least one sample");
  for (const auto& c : spec.curves)
    if (c.y.size() != spec.x.size()) throw std::invalid_argument("curve length does not match the x samples");
  if (spec.log_x && *std::min_element(spec.x.begin(), spec.x.end()) <= 0.0)
    throw std::invalid_argument("log axis needs positive x");

  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  double x0 = tx(spec.x.front()), x1 = tx(spec.x.back());
  if (x0 > x1) std::swap(x0, x1);
  if (x1 - x0 <= 0.0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& c : spec.curves)
    for (double v : c.y)
      if (std::isfinite(v)) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
      }
  if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
  if (y1 - y0 <= 0.0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
    << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << escape(spec.title) << "</text>\n";

  // Grid and ticks.
  s << "<g stroke=\"#dddddd\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const double ystep = nice_step(y1 - y0, 8);
  for (double y = std::ceil(y0 / ystep) * ystep; y <= y1; y += ystep) {
    const double v = std::abs(y) < 1e-9 * ystep ? 0.0 : y;
    s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
      << num(py(v)) << "\"/>\n"
      << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\" stroke=\"none\" "
      << "fill=\"black\">" << tick_label(v) << "</text>\n";
  }
  std::vector<double> xticks;
  if (spec.log_x) {
    for (double d = std::floor(x0); d <= std::ceil(x1); d += 1.0)
      if (d >= x0 - 1e-12 && d <= x1 + 1e-12) xticks.push_back(std::pow(10.0, d));
  } else {
    const double xstep = nice_step(x1 - x0, 8);
    for (double x = std::ceil(x0 / xstep) * xstep; x <= x1; x += xstep) xticks.push_back(x);
  }
  for (double x : xticks) {
    s << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(x)) << "\" y2=\""
      << num(kTop + ph) << "\"/>\n"
      << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\" "
      << "stroke=\"none\" fill=\"black\">" << tick_label(x) << "</text>\n";
  }
  s << "</g>\n";

  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (y0 < 0.0 && y1 > 0.0)
    s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
      << num(py(0.0)) << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

  for (const auto& c : spec.curves) {
    s << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < spec.x.size(); ++i) {
      if (!std::isfinite(c.y[i])) continue;
      s << (first ? "" : " ") << num(px(spec.x[i])) << ',' << num(py(c.y[i]));
      first = false;
    }
    s << "\"/>\n";
  }

  // Legend.
  double ly = kTop + 20;
  for (const auto& c : spec.curves) {
    const double lx = kLeft + pw + 15;
    s << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 25) << "\" y2=\"" << num(ly)
      << "\" stroke=\"" << c.color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4) << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(c.label) << "</text>\n";
    ly += 22;
  }

  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 20)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(spec.x_label) << "</text>\n"
    << "<text x=\"20\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 20 " << num(kTop + ph / 2) << ")\">" << escape(spec.y_label)
    << "</text>\n"
    << "</svg>\n";
  return s.str();
}

}  // namespace scaledyn::cli
