#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gymnav/geometry.hpp"
#include "gymnav/harness.hpp"

namespace gymnav::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // y per episode; x is the index
  std::string color;
  double stroke_width = 1.0;
};

/// Line chart with episode on x and cumulated reward on y.
std::string plot(const std::vector<Series>& series, std::string_view title);

/// Raw per-episode rewards (blue) with their moving average (red).
std::string learning_curve(const RunLog& log, int window);

/// Walls, start pose, and an optional trajectory polyline.
std::string world(const WorldMap& world, std::span<const RobotPose> trajectory = {});

}  // namespace gymnav::svg
