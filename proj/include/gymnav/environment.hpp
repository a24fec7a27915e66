#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gymnav/geometry.hpp"
#include "gymnav/vehicle.hpp"

namespace gymnav {

enum class Action : std::uint8_t { Forward = 0, Left = 1, Right = 2 };

inline constexpr std::size_t kNumActions = 3;
inline constexpr std::array<Action, kNumActions> kAllActions = {Action::Forward, Action::Left,
                                                                Action::Right};

constexpr std::size_t index_of(Action a) { return static_cast<std::size_t>(a); }
std::string_view action_name(Action a);
std::optional<Action> parse_action(std::string_view name);

/// Fixed velocity mapping of the three-action set.
constexpr VelocityCommand action_command(Action a) {
  switch (a) {
    case Action::Forward: return {0.3, 0.0};
    case Action::Left: return {0.05, 0.3};
    case Action::Right: return {0.05, -0.3};
  }
  return {};
}

/// Five integer LIDAR bins, the tabular state. The key is the bins' decimal
/// digits concatenated in beam order, e.g. "01550".
struct DiscreteState {
  static constexpr std::size_t kBins = 5;
  std::array<std::uint8_t, kBins> bins{};

  std::string key() const;
  static DiscreteState from_key(std::string_view key);  // throws std::invalid_argument

  bool operator==(const DiscreteState&) const = default;
};

struct Rewards {
  double forward = 5.0;
  double turn = 1.0;
  double crash = -200.0;
};

struct EnvConfig {
  WorldMap world;
  double fov = 1.5 * std::numbers::pi;
  int n_beams = 5;
  double max_range = 6.0;
  double bin_width = 1.0;
  int max_bin = 5;
  double action_duration = 0.4;  // seconds each action is applied
  int substeps = 8;              // collision checks per action
  double collision_threshold = 0.21;
  Rewards rewards;

  /// Throws std::invalid_argument when a field is out of range or the start
  /// pose is within collision_threshold of a wall.
  void validate() const;
};

struct StepResult {
  DiscreteState observation;
  double reward = 0.0;
  bool done = false;
};

/// floor(clamp(range, 0, max_range - 1e-9) / bin_width) per beam.
DiscreteState discretize(std::span<const double> scan, const EnvConfig& cfg);

/// Thrown when a caller breaks the reset/step protocol.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Minimal episodic interface the training loop drives.
class EpisodicEnv {
 public:
  virtual ~EpisodicEnv() = default;
  virtual DiscreteState reset() = 0;
  virtual StepResult step(Action action) = 0;
};

/// Differential-drive robot with a 5-beam LIDAR in a polygonal world.
class Environment final : public EpisodicEnv {
 public:
  explicit Environment(EnvConfig cfg);

  DiscreteState reset() override;
  StepResult step(Action action) override;

  const EnvConfig& config() const { return cfg_; }
  const RobotPose& pose() const { return pose_; }
  bool done() const { return done_; }
  std::uint64_t steps() const { return steps_; }

  /// Moves the robot without stepping; used for scenario setup. Clears the
  /// done flag and returns the observation at the new pose.
  DiscreteState teleport(const RobotPose& pose);

 private:
  DiscreteState observe() const;

  EnvConfig cfg_;
  RobotPose pose_;
  bool done_ = false;
  std::uint64_t steps_ = 0;
};

}  // namespace gymnav
