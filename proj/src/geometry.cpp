#include "gymnav/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gymnav {

namespace {

// Relative tolerance used to classify a ray as parallel/collinear with a segment.
constexpr double kParallelEps = 1e-12;

}  // namespace

std::optional<double> ray_segment_intersect(const Ray& ray, const Segment& seg) {
  const Vec2 d = ray.direction;
  const Vec2 s = seg.b - seg.a;
  const Vec2 w = seg.a - ray.origin;

  const double denom = cross(d, s);
  const double seg_len = norm(s);

  if (std::abs(denom) > kParallelEps * seg_len) {
    const double t = cross(w, s) / denom;
    const double u = cross(w, d) / denom;
    if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
  }

  // Parallel. Only a collinear segment can be hit.
  if (std::abs(cross(w, d)) > kParallelEps * std::max(1.0, norm(w))) {
    return std::nullopt;
  }
  const double ta = dot(seg.a - ray.origin, d);
  const double tb = dot(seg.b - ray.origin, d);
  const double near = std::min(ta, tb);
  const double far = std::max(ta, tb);
  if (far < 0.0) return std::nullopt;
  return std::max(0.0, near);
}

double point_segment_distance(Vec2 p, const Segment& seg) {
  const Vec2 s = seg.b - seg.a;
  const double len2 = dot(s, s);
  double u = len2 > 0.0 ? dot(p - seg.a, s) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return norm(p - (seg.a + s * u));
}

double min_wall_distance(const WorldMap& world, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : world.segments) {
    best = std::min(best, point_segment_distance(p, seg));
  }
  return best;
}

void cast_scan(const WorldMap& world, const RobotPose& pose, double fov,
               double max_range, std::span<double> out) {
  const auto n = out.size();
  const double step = n > 1 ? fov / static_cast<double>(n - 1) : 0.0;
  const double first = n > 1 ? pose.theta - fov / 2.0 : pose.theta;
  const Vec2 origin = pose.position();
  for (std::size_t i = 0; i < n; ++i) {
    const Ray ray = Ray::from_angle(origin, first + static_cast<double>(i) * step);
    double range = max_range;
    for (const auto& seg : world.segments) {
      if (auto t = ray_segment_intersect(ray, seg); t && *t < range) range = *t;
    }
    out[i] = std::clamp(range, 0.0, max_range);
  }
}

LidarScan cast_scan(const WorldMap& world, const RobotPose& pose, double fov,
                    int n_beams, double max_range) {
  LidarScan scan(static_cast<std::size_t>(std::max(n_beams, 0)), max_range);
  cast_scan(world, pose, fov, max_range, scan);
  return scan;
}

// --- world files -----------------------------------------------------------

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

WorldMap parse_world(std::string_view text, std::string_view origin) {
  WorldMap world;
  bool have_name = false;
  bool have_start = false;
  int line_no = 0;

  auto fail = [&](const std::string& what) -> WorldError {
    return WorldError(fmt::format("{}:{}: {}", origin, line_no, what));
  };
  auto number = [&](std::string_view tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw fail(fmt::format("invalid number '{}'", tok));
    }
    return v;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    const auto& kw = tok[0];
    if (kw == "name") {
      if (tok.size() != 2) throw fail("expected 'name <identifier>'");
      if (have_name) throw fail("duplicate 'name'");
      world.name = std::string(tok[1]);
      have_name = true;
    } else if (kw == "start") {
      if (tok.size() != 4) throw fail("expected 'start <x> <y> <theta>'");
      if (have_start) throw fail("duplicate 'start'");
      world.start = {number(tok[1]), number(tok[2]), number(tok[3])};
      have_start = true;
    } else if (kw == "segment") {
      if (tok.size() != 5) throw fail("expected 'segment <x1> <y1> <x2> <y2>'");
      Segment seg{{number(tok[1]), number(tok[2])}, {number(tok[3]), number(tok[4])}};
      if (seg.a == seg.b) throw fail("zero-length segment");
      world.segments.push_back(seg);
    } else {
      throw fail(fmt::format("unknown directive '{}'", kw));
    }
  }

  auto incomplete = [&](std::string_view what) {
    return WorldError(fmt::format("{}: {}", origin, what));
  };
  if (!have_name) throw incomplete("missing 'name'");
  if (!have_start) throw incomplete("missing 'start'");
  if (world.segments.size() < 3) throw incomplete("a world needs at least 3 segments");
  return world;
}

WorldMap load_world(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WorldError(fmt::format("cannot open world file {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_world(buf.str(), path.string());
}

std::string format_world(const WorldMap& world) {
  std::string out = fmt::format("name {}\nstart {:.17g} {:.17g} {:.17g}\n", world.name,
                                world.start.x, world.start.y, world.start.theta);
  for (const auto& s : world.segments) {
    out += fmt::format("segment {:.17g} {:.17g} {:.17g} {:.17g}\n", s.a.x, s.a.y, s.b.x, s.b.y);
  }
  return out;
}

}  // namespace gymnav
