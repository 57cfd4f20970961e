#include "khess/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "khess/errors.hpp"

namespace khess::svg {

namespace {

constexpr double kLeft = 70;
constexpr double kRight = 30;
constexpr double kTop = 50;
constexpr double kBottom = 60;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Canvas::Canvas(Range x, Range y, std::string title) : x_(x), y_(y), title_(std::move(title)) {
  if (!(x_.hi > x_.lo) || !(y_.hi > y_.lo)) throw DomainError("svg: empty plot range");
}

double Canvas::px(double x) const {
  return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
}

double Canvas::py(double y) const {
  return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      double width, bool dashed) {
  if (pts.empty()) return;
  std::string d = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(width) +
                  "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) d += ' ';
    d += fmt(px(pts[i].first)) + "," + fmt(py(pts[i].second));
  }
  body_.push_back(d + "\"/>");
}

void Canvas::marker(double x, double y, const std::string& color, double radius) {
  body_.push_back("<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" +
                  fmt(radius) + "\" fill=\"" + color + "\"/>");
}

void Canvas::label(double x, double y, const std::string& text) {
  body_.push_back("<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) +
                  "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(text) + "</text>");
}

void Canvas::axes(const std::string& xlabel, const std::string& ylabel) {
  const double x0 = px(x_.lo), x1 = px(x_.hi), y0 = py(y_.lo), y1 = py(y_.hi);
  body_.push_back("<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y1) + "\" width=\"" + fmt(x1 - x0) +
                  "\" height=\"" + fmt(y0 - y1) + "\" fill=\"none\" stroke=\"#000\"/>");
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_.lo + (x_.hi - x_.lo) * i / 5.0;
    const double fy = y_.lo + (y_.hi - y_.lo) * i / 5.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.3g", fx);
    std::snprintf(by, sizeof by, "%.3g", fy);
    body_.push_back("<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(y0 + 18) +
                    "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + bx +
                    "</text>");
    body_.push_back("<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(py(fy) + 4) +
                    "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + by +
                    "</text>");
  }
  body_.push_back("<text x=\"" + fmt(0.5 * (x0 + x1)) + "\" y=\"" + fmt(kHeight - 15) +
                  "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
                  escape(xlabel) + "</text>");
  body_.push_back("<text x=\"20\" y=\"" + fmt(0.5 * (y0 + y1)) +
                  "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
                  escape(ylabel) + "</text>");
}

std::string Canvas::render(const std::string& timestamp) const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- generated " << timestamp << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
        "height=\"600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"#fff\"/>\n";
  os << "<text x=\"400\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">"
     << escape(title_) << "</text>\n";
  for (const auto& e : body_) os << e << '\n';
  os << "</svg>\n";
  return os.str();
}

std::string phase_diagram(const Trajectory& traj, const std::string& timestamp) {
  const ProblemSpec& spec = traj.spec();
  const auto samples = traj.samples();
  double vmax = 1.0, wmax = std::max(1.0, static_cast<double>(spec.gap()));
  for (const auto& s : samples) {
    vmax = std::max(vmax, s.point.v);
    wmax = std::max(wmax, s.point.w);
  }
  Canvas c({0, 1.1 * vmax}, {0, 1.1 * wmax},
           "n=" + std::to_string(spec.n()) + ", k=" + std::to_string(spec.k()));
  c.axes("v", "w");
  c.polyline({{1.0, 0.0}, {1.0, 1.1 * wmax}}, "#888", 1.0, true);
  if (equilibrium_linearization(spec).b_range) {
    const double b = region_exponent(spec);
    const double g = spec.gap();
    std::vector<std::pair<double, double>> lower, upper;
    for (int i = 0; i <= 200; ++i) {
      const double v = i / 200.0;
      lower.emplace_back(v, g * v);
      upper.emplace_back(v, g * std::pow(v, b));
    }
    c.polyline(lower, "#2a7", 1.2, true);
    c.polyline(upper, "#2a7", 1.2, true);
  }
  std::vector<std::pair<double, double>> path;
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 4000);
  for (std::size_t i = 0; i < samples.size(); i += stride)
    path.emplace_back(samples[i].point.v, samples[i].point.w);
  path.emplace_back(samples.back().point.v, samples.back().point.w);
  c.polyline(path, "#c22", 1.8);
  if (!spec.monge_ampere()) {
    c.marker(1.0, spec.gap(), "#000");
    c.label(1.0, spec.gap(), "  (1, n-k)");
  }
  return c.render(timestamp);
}

}  // namespace khess::svg
