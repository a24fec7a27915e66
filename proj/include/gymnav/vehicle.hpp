#pragma once

#include "gymnav/pose.hpp"

namespace gymnav {

// Linear velocity along the heading (m/s) and counterclockwise turn rate (rad/s).
struct VelocityCommand {
  double v = 0.0;
  double w = 0.0;

  static constexpr double kMaxLinear = 1.0;
  static constexpr double kMaxAngular = 2.0;

  bool valid() const;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

/// Exact unicycle motion under a constant command for `dt` seconds.
/// Straight-line update when |w| < 1e-9, circular arc otherwise.
RobotPose integrate(const RobotPose& pose, const VelocityCommand& cmd, double dt);

}  // namespace gymnav
