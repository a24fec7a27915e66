#include "gymnav/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gymnav::svg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 450.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string escape(std::string_view s) {
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

// Round tick step: 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string plot(const std::vector<Series>& series, std::string_view title) {
  std::size_t n = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (n == 0) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double xmax = std::max<double>(1.0, static_cast<double>(n) - 1.0);
  const double pw = kWidth - kMarginLeft - kMarginRight;
  const double ph = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + x / xmax * pw; };
  auto py = [&](double y) { return kMarginTop + (hi - y) / (hi - lo) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"16\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));

  // Axes and ticks.
  out += fmt::format(
      "<g stroke=\"black\" stroke-width=\"1\">\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\"/>\n</g>\n",
      kMarginLeft, kMarginTop, kMarginTop + ph, kMarginLeft + pw);
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double ystep = nice_step(hi - lo, 6);
  for (double y = std::ceil(lo / ystep) * ystep; y <= hi + 1e-9; y += ystep) {
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
        kMarginLeft, py(y), kMarginLeft + pw, kMarginLeft - 6, py(y) + 4, y);
  }
  const double xstep = nice_step(xmax, 8);
  for (double x = 0.0; x <= xmax + 1e-9; x += xstep) {
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n",
                       px(x), kMarginTop + ph + 16, x);
  }
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">episode</text>\n"
      "<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {:.2f})\">cumulated reward</text>\n</g>\n",
      kMarginLeft + pw / 2, kHeight - 10, kMarginTop + ph / 2, kMarginTop + ph / 2);

  double legend_y = kMarginTop + 12;
  for (const auto& s : series) {
    out += fmt::format("<polyline class=\"series\" data-label=\"{}\" fill=\"none\" stroke=\"{}\" "
                       "stroke-width=\"{}\" points=\"",
                       escape(s.label), s.color, s.stroke_width);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(static_cast<double>(i)),
                         py(s.values[i]));
    }
    out += "\"/>\n";
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
        "fill=\"{}\">{}</text>\n",
        kMarginLeft + 10, legend_y, s.color, escape(s.label));
    legend_y += 16;
  }
  out += "</svg>\n";
  return out;
}

std::string learning_curve(const RunLog& log, int window) {
  const auto raw = log.rewards();
  std::vector<Series> series;
  series.push_back({"cumulated reward", raw, "blue", 0.6});
  series.push_back({fmt::format("moving average ({})", window), moving_average(raw, window),
                    "red", 2.0});
  return plot(series, fmt::format("{} on {} (seed {})", algorithm_name(log.algorithm), log.env_id,
                                  log.seed));
}

std::string world(const WorldMap& map, std::span<const RobotPose> trajectory) {
  double xmin = map.start.x, xmax = map.start.x, ymin = map.start.y, ymax = map.start.y;
  for (const auto& s : map.segments) {
    for (Vec2 p : {s.a, s.b}) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double pad = 0.5;
  xmin -= pad;
  ymin -= pad;
  xmax += pad;
  ymax += pad;
  constexpr double kScale = 40.0;  // pixels per meter
  const double w = (xmax - xmin) * kScale;
  const double h = (ymax - ymin) * kScale;
  // SVG y grows downward.
  auto sx = [&](double x) { return (x - xmin) * kScale; };
  auto sy = [&](double y) { return (ymax - y) * kScale; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.2f} {1:.2f}\">\n"
      "<title>{2}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<g class=\"walls\" stroke=\"black\" stroke-width=\"3\" stroke-linecap=\"round\">\n",
      w, h, escape(map.name));
  for (const auto& s : map.segments) {
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n",
                       sx(s.a.x), sy(s.a.y), sx(s.b.x), sy(s.b.y));
  }
  out += "</g>\n";

  if (!trajectory.empty()) {
    out += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" "
           "points=\"";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(trajectory[i].x),
                         sy(trajectory[i].y));
    }
    out += "\"/>\n";
  }

  const auto& p = map.start;
  out += fmt::format(
      "<g class=\"start\">\n<circle cx=\"{0:.2f}\" cy=\"{1:.2f}\" r=\"{2:.2f}\" fill=\"green\"/>\n"
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{3:.2f}\" y2=\"{4:.2f}\" stroke=\"green\" "
      "stroke-width=\"3\"/>\n</g>\n</svg>\n",
      sx(p.x), sy(p.y), 0.18 * kScale, sx(p.x + 0.5 * std::cos(p.theta)),
      sy(p.y + 0.5 * std::sin(p.theta)));
  return out;
}

}  // namespace gymnav::svg
