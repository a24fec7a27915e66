#include "gymnav/environment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gymnav {

namespace {
constexpr double kBinCeilingEps = 1e-9;
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Forward: return "Forward";
    case Action::Left: return "Left";
    case Action::Right: return "Right";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view name) {
  for (Action a : kAllActions) {
    if (action_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string DiscreteState::key() const {
  std::string k(kBins, '0');
  for (std::size_t i = 0; i < kBins; ++i) k[i] = static_cast<char>('0' + bins[i]);
  return k;
}

DiscreteState DiscreteState::from_key(std::string_view key) {
  if (key.size() != kBins) {
    throw std::invalid_argument(fmt::format("state key '{}' must have {} digits", key, kBins));
  }
  DiscreteState s;
  for (std::size_t i = 0; i < kBins; ++i) {
    if (key[i] < '0' || key[i] > '9') {
      throw std::invalid_argument(fmt::format("state key '{}' is not decimal", key));
    }
    s.bins[i] = static_cast<std::uint8_t>(key[i] - '0');
  }
  return s;
}

void EnvConfig::validate() const {
  auto bad = [](const std::string& what) { return std::invalid_argument("EnvConfig: " + what); };
  if (!(fov > 0.0 && fov <= 2.0 * std::numbers::pi)) throw bad("fov must be in (0, 2pi]");
  if (n_beams != static_cast<int>(DiscreteState::kBins)) throw bad("n_beams must be 5");
  if (!(max_range > 0.0)) throw bad("max_range must be positive");
  if (!(bin_width > 0.0)) throw bad("bin_width must be positive");
  if (max_bin > 9) throw bad("max_bin must fit in one decimal digit");
  if (max_bin != static_cast<int>(std::floor((max_range - kBinCeilingEps) / bin_width))) {
    throw bad("max_bin must equal floor((max_range - eps) / bin_width)");
  }
  if (!(action_duration > 0.0)) throw bad("action_duration must be positive");
  if (substeps < 1) throw bad("substeps must be at least 1");
  if (!(collision_threshold > 0.0)) throw bad("collision_threshold must be positive");
  if (world.segments.size() < 3) throw bad("world needs at least 3 segments");
  const double clearance = min_wall_distance(world, world.start.position());
  if (!(clearance > collision_threshold)) {
    throw bad(fmt::format("start pose of world '{}' is {:.3f} m from a wall (threshold {})",
                          world.name, clearance, collision_threshold));
  }
}

DiscreteState discretize(std::span<const double> scan, const EnvConfig& cfg) {
  DiscreteState s;
  const double ceiling = cfg.max_range - kBinCeilingEps;
  const std::size_t n = std::min(scan.size(), DiscreteState::kBins);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::clamp(scan[i], 0.0, ceiling);
    s.bins[i] = static_cast<std::uint8_t>(std::floor(r / cfg.bin_width));
  }
  return s;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cfg_.world.start.theta = normalize_angle(cfg_.world.start.theta);
  pose_ = cfg_.world.start;
}

DiscreteState Environment::observe() const {
  std::array<double, DiscreteState::kBins> ranges{};
  cast_scan(cfg_.world, pose_, cfg_.fov, cfg_.max_range, ranges);
  return discretize(ranges, cfg_);
}

DiscreteState Environment::reset() {
  pose_ = cfg_.world.start;
  done_ = false;
  steps_ = 0;
  return observe();
}

DiscreteState Environment::teleport(const RobotPose& pose) {
  pose_ = pose;
  pose_.theta = normalize_angle(pose_.theta);
  done_ = false;
  return observe();
}

StepResult Environment::step(Action action) {
  if (done_) throw ContractViolation("step() called on a finished episode; call reset() first");
  ++steps_;

  const VelocityCommand cmd = action_command(action);
  const double dt = cfg_.action_duration / cfg_.substeps;
  for (int i = 0; i < cfg_.substeps; ++i) {
    pose_ = integrate(pose_, cmd, dt);
    if (min_wall_distance(cfg_.world, pose_.position()) < cfg_.collision_threshold) {
      done_ = true;
      return {observe(), cfg_.rewards.crash, true};
    }
  }
  const double reward = action == Action::Forward ? cfg_.rewards.forward : cfg_.rewards.turn;
  return {observe(), reward, false};
}

}  // namespace gymnav
