#include "gymnav/vehicle.hpp"

#include <cmath>
#include <numbers>

namespace gymnav {

namespace {
constexpr double kStraightEps = 1e-9;
}

bool VelocityCommand::valid() const {
  return std::isfinite(v) && std::isfinite(w) && std::abs(v) <= kMaxLinear &&
         std::abs(w) <= kMaxAngular;
}

double normalize_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (theta > -pi && theta <= pi) return theta;
  double r = std::fmod(theta + pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - pi;
}

RobotPose integrate(const RobotPose& pose, const VelocityCommand& cmd, double dt) {
  RobotPose next = pose;
  if (std::abs(cmd.w) < kStraightEps) {
    next.x += cmd.v * dt * std::cos(pose.theta);
    next.y += cmd.v * dt * std::sin(pose.theta);
    next.theta = normalize_angle(pose.theta + cmd.w * dt);
    return next;
  }
  const double radius = cmd.v / cmd.w;
  const double heading = pose.theta + cmd.w * dt;
  next.x += radius * (std::sin(heading) - std::sin(pose.theta));
  next.y -= radius * (std::cos(heading) - std::cos(pose.theta));
  next.theta = normalize_angle(heading);
  return next;
}

}  // namespace gymnav
