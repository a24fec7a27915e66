#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gymnav/pose.hpp"

namespace gymnav {

struct Segment {
  Vec2 a;
  Vec2 b;
};

struct Ray {
  Vec2 origin;
  Vec2 direction;  // unit norm

  static Ray from_angle(Vec2 origin, double angle) {
    return {origin, {std::cos(angle), std::sin(angle)}};
  }
};

struct WorldMap {
  std::string name;
  std::vector<Segment> segments;
  RobotPose start;
};

using LidarScan = std::vector<double>;

class WorldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance along `ray` to the first point of `seg`, or nullopt on a miss.
/// Collinear overlap reports the nearest overlapping point; touching an
/// endpoint counts as a hit.
std::optional<double> ray_segment_intersect(const Ray& ray, const Segment& seg);

/// Euclidean distance from `p` to the closed segment.
double point_segment_distance(Vec2 p, const Segment& seg);

/// Minimum distance from `p` to any wall of the world.
double min_wall_distance(const WorldMap& world, Vec2 p);

/// Casts `n_beams` rays spread evenly (endpoints included) over `fov`
/// centred on the pose heading. Misses and far hits read `max_range`.
LidarScan cast_scan(const WorldMap& world, const RobotPose& pose, double fov,
                    int n_beams, double max_range);

// Same as above but writes into a caller-owned buffer of size n_beams.
void cast_scan(const WorldMap& world, const RobotPose& pose, double fov,
               double max_range, std::span<double> out);

/// Parses the line-oriented world format:
///   name <identifier>
///   start <x> <y> <theta>
///   segment <x1> <y1> <x2> <y2>
/// '#' starts a comment. Throws WorldError with the offending line number.
/// The clearance check on the start pose is left to the environment, which
/// owns the collision threshold.
WorldMap parse_world(std::string_view text, std::string_view origin = "<string>");
WorldMap load_world(const std::filesystem::path& path);

/// Inverse of parse_world; numbers printed round-trip exact.
std::string format_world(const WorldMap& world);

}  // namespace gymnav
