#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gymnav/agents.hpp"
#include "gymnav/environment.hpp"
#include "gymnav/registry.hpp"

namespace gymnav {

struct EpisodeRecord {
  int index = 0;
  int steps = 0;
  double cumulative_reward = 0.0;
  double epsilon = 0.0;  // exploration rate used throughout the episode
  bool crashed = false;

  bool operator==(const EpisodeRecord&) const = default;
};

struct RunLog {
  std::string env_id;
  Algorithm algorithm = Algorithm::QLearning;
  AgentConfig config;
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;

  std::vector<double> rewards() const;
};

/// One learning update, as handed to an optional observer.
struct Transition {
  std::string state;
  Action action;
  double reward;
  std::string next_state;
  std::optional<Action> next_action;  // Sarsa only, absent on terminal steps
  bool terminal;
};
using TransitionObserver = std::function<void(const Transition&)>;

/// Resets `env` and runs one episode of at most `max_steps` steps, learning
/// online into `q`. Q-Learning picks a fresh action every step; Sarsa picks
/// a' before its update and executes that same a' on the next step.
EpisodeRecord run_episode(EpisodicEnv& env, Algorithm algo, QTable& q, const AgentConfig& cfg,
                          double epsilon, int max_steps, Rng& rng,
                          const TransitionObserver& observer = {});

struct TrainResult {
  RunLog log;
  QTable qtable;
};

/// Runs `episodes` episodes from a zero table. Episode k uses epsilon0
/// decayed k times.
TrainResult train(Environment& env, std::string_view env_id, Algorithm algo,
                  const AgentConfig& cfg, int episodes, int max_steps, std::uint64_t seed);
TrainResult train(const Registry& registry, std::string_view env_id, Algorithm algo,
                  const AgentConfig& cfg, int episodes, int max_steps, std::uint64_t seed);

struct TrainJob {
  std::string env_id;
  Algorithm algorithm = Algorithm::QLearning;
  AgentConfig config;
  int episodes = 3000;
  int max_steps = 1500;
  std::uint64_t seed = 0;
};

/// Runs independent jobs on up to `threads` workers. Results come back in
/// job order regardless of scheduling.
std::vector<TrainResult> train_all(const Registry& registry, const std::vector<TrainJob>& jobs,
                                   int threads);

// --- analysis --------------------------------------------------------------

struct IntervalMean {
  int start = 0;  // first episode, inclusive
  int end = 0;    // one past the last episode
  double mean = 0.0;
};

/// Means of consecutive blocks of `interval` episodes; a trailing partial
/// block is reported with its own length. Throws on an empty series.
std::vector<IntervalMean> interval_averages(std::span<const double> rewards, int interval);
std::vector<IntervalMean> interval_averages(const RunLog& log, int interval);

/// Trailing mean over the last `window` values (fewer at the start).
std::vector<double> moving_average(std::span<const double> values, int window);
std::vector<double> moving_average(const RunLog& log, int window);

/// Index of the first block with a positive mean.
std::optional<std::size_t> learning_onset(std::span<const IntervalMean> intervals);

struct ComparisonRow {
  int start = 0;
  int end = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double difference = 0.0;  // mean_a - mean_b
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::optional<std::size_t> onset_a;
  std::optional<std::size_t> onset_b;
};

Comparison compare_intervals(std::span<const IntervalMean> a, std::span<const IntervalMean> b);
Comparison compare(const RunLog& a, const RunLog& b, int interval);

/// Plain-text table with an onset row per column.
std::string format_comparison(const Comparison& cmp, std::string_view label_a,
                              std::string_view label_b);

// --- CSV -------------------------------------------------------------------

/// `episode,steps,cum_reward,epsilon,crashed`, reals with 17 significant digits.
std::string run_csv(const RunLog& log);
std::vector<EpisodeRecord> parse_run_csv(std::string_view text);  // throws std::invalid_argument

std::string intervals_csv(std::span<const IntervalMean> intervals);

/// `interval_start,interval_end,<name>...` with one mean column per series.
/// All series must share the same interval boundaries.
std::string intervals_table_csv(const std::vector<std::string>& names,
                                const std::vector<std::vector<IntervalMean>>& columns);

// --- rollouts and throughput -----------------------------------------------

/// Greedy (epsilon = 0) rollout from reset; returns the visited poses,
/// starting pose included. Ties are broken with `rng`.
std::vector<RobotPose> greedy_rollout(Environment& env, const QTable& q, Rng& rng,
                                      int max_steps);

struct Throughput {
  std::uint64_t steps = 0;
  double seconds = 0.0;
  double steps_per_second() const { return seconds > 0.0 ? steps / seconds : 0.0; }
};

/// Times `steps` uniformly random actions, resetting after every crash.
Throughput measure_throughput(Environment& env, std::uint64_t steps, std::uint64_t seed);

}  // namespace gymnav
