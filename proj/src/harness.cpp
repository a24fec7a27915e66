#include "gymnav/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gymnav {

std::vector<double> RunLog::rewards() const {
  std::vector<double> out;
  out.reserve(episodes.size());
  for (const auto& e : episodes) out.push_back(e.cumulative_reward);
  return out;
}

EpisodeRecord run_episode(EpisodicEnv& env, Algorithm algo, QTable& q, const AgentConfig& cfg,
                          double epsilon, int max_steps, Rng& rng,
                          const TransitionObserver& observer) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");

  EpisodeRecord rec;
  rec.epsilon = epsilon;

  std::string state = env.reset().key();
  Action action = choose_action(q, state, epsilon, rng);

  for (int i = 0; i < max_steps; ++i) {
    const StepResult res = env.step(action);
    std::string next_state = res.observation.key();
    rec.steps += 1;
    rec.cumulative_reward += res.reward;

    std::optional<Action> next_action;
    if (algo == Algorithm::QLearning) {
      q_learning_update(q, state, action, res.reward, next_state, res.done, cfg);
    } else {
      if (!res.done) next_action = choose_action(q, next_state, epsilon, rng);
      sarsa_update(q, state, action, res.reward, next_state, next_action.value_or(action),
                   res.done, cfg);
    }
    if (observer) observer({state, action, res.reward, next_state, next_action, res.done});

    if (res.done) {
      rec.crashed = true;
      break;
    }
    state = std::move(next_state);
    if (i + 1 < max_steps) {
      action = next_action ? *next_action : choose_action(q, state, epsilon, rng);
    }
  }
  return rec;
}

TrainResult train(Environment& env, std::string_view env_id, Algorithm algo,
                  const AgentConfig& cfg, int episodes, int max_steps, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  cfg.validate();

  TrainResult result;
  result.log.env_id = std::string(env_id);
  result.log.algorithm = algo;
  result.log.config = cfg;
  result.log.seed = seed;
  result.log.episodes.reserve(static_cast<std::size_t>(episodes));

  Rng rng(seed);
  double epsilon = cfg.epsilon0;
  for (int k = 0; k < episodes; ++k) {
    EpisodeRecord rec = run_episode(env, algo, result.qtable, cfg, epsilon, max_steps, rng);
    rec.index = k;
    result.log.episodes.push_back(rec);
    epsilon = decay_epsilon(epsilon, cfg);
  }
  return result;
}

TrainResult train(const Registry& registry, std::string_view env_id, Algorithm algo,
                  const AgentConfig& cfg, int episodes, int max_steps, std::uint64_t seed) {
  Environment env = registry.make(env_id);
  return train(env, env_id, algo, cfg, episodes, max_steps, seed);
}

std::vector<TrainResult> train_all(const Registry& registry, const std::vector<TrainJob>& jobs,
                                   int threads) {
  std::vector<TrainResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto& job = jobs[i];
        results[i] = train(registry, job.env_id, job.algorithm, job.config, job.episodes,
                           job.max_steps, job.seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const auto n = static_cast<std::size_t>(std::max(1, threads));
  if (n == 1 || jobs.size() <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(n, jobs.size()); ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

// --- analysis --------------------------------------------------------------

std::vector<IntervalMean> interval_averages(std::span<const double> rewards, int interval) {
  if (rewards.empty()) throw std::invalid_argument("interval_averages: empty run log");
  if (interval < 1) throw std::invalid_argument("interval_averages: interval must be >= 1");
  std::vector<IntervalMean> out;
  const auto n = static_cast<int>(rewards.size());
  for (int start = 0; start < n; start += interval) {
    const int end = std::min(n, start + interval);
    double sum = 0.0;
    for (int i = start; i < end; ++i) sum += rewards[static_cast<std::size_t>(i)];
    out.push_back({start, end, sum / (end - start)});
  }
  return out;
}

std::vector<IntervalMean> interval_averages(const RunLog& log, int interval) {
  return interval_averages(log.rewards(), interval);
}

std::vector<double> moving_average(std::span<const double> values, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(values.size());
  const auto w = static_cast<std::size_t>(window);
  // Each window is summed directly so window=1 returns the input exactly.
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(i + 1 - lo);
  }
  return out;
}

std::vector<double> moving_average(const RunLog& log, int window) {
  return moving_average(log.rewards(), window);
}

std::optional<std::size_t> learning_onset(std::span<const IntervalMean> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].mean > 0.0) return i;
  }
  return std::nullopt;
}

Comparison compare_intervals(std::span<const IntervalMean> a, std::span<const IntervalMean> b) {
  if (a.size() != b.size()) throw std::invalid_argument("compare: interval counts differ");
  Comparison cmp;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].start != b[i].start || a[i].end != b[i].end) {
      throw std::invalid_argument("compare: interval boundaries differ");
    }
    cmp.rows.push_back({a[i].start, a[i].end, a[i].mean, b[i].mean, a[i].mean - b[i].mean});
  }
  cmp.onset_a = learning_onset(a);
  cmp.onset_b = learning_onset(b);
  return cmp;
}

Comparison compare(const RunLog& a, const RunLog& b, int interval) {
  if (a.episodes.size() != b.episodes.size()) {
    throw std::invalid_argument(fmt::format("compare: episode counts differ ({} vs {})",
                                            a.episodes.size(), b.episodes.size()));
  }
  const auto ia = interval_averages(a, interval);
  const auto ib = interval_averages(b, interval);
  return compare_intervals(ia, ib);
}

std::string format_comparison(const Comparison& cmp, std::string_view label_a,
                              std::string_view label_b) {
  std::string out = fmt::format("{:<18}{:>14}{:>14}{:>14}\n", "Episode interval", label_a,
                                label_b, "difference");
  for (const auto& r : cmp.rows) {
    out += fmt::format("{:<18}{:>14.1f}{:>14.1f}{:>14.1f}\n", fmt::format("{}-{}", r.start, r.end),
                       r.mean_a, r.mean_b, r.difference);
  }
  auto onset = [&](const std::optional<std::size_t>& i) -> std::string {
    if (!i) return "none";
    const auto& r = cmp.rows[*i];
    return fmt::format("{}-{}", r.start, r.end);
  };
  out += fmt::format("{:<18}{:>14}{:>14}\n", "Learning onset", onset(cmp.onset_a),
                     onset(cmp.onset_b));
  return out;
}

// --- CSV -------------------------------------------------------------------

std::string run_csv(const RunLog& log) {
  std::string out = "episode,steps,cum_reward,epsilon,crashed\n";
  for (const auto& e : log.episodes) {
    out += fmt::format("{},{},{:.17g},{:.17g},{}\n", e.index, e.steps, e.cumulative_reward,
                       e.epsilon, e.crashed ? 1 : 0);
  }
  return out;
}

std::vector<EpisodeRecord> parse_run_csv(std::string_view text) {
  constexpr std::string_view kHeader = "episode,steps,cum_reward,epsilon,crashed";
  std::vector<EpisodeRecord> out;
  std::size_t pos = 0;
  int line_no = 0;
  auto bad = [&](std::string_view what) {
    return std::invalid_argument(fmt::format("run csv line {}: {}", line_no, what));
  };

  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line_no == 1) {
      if (line != kHeader) throw bad("unexpected header");
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[5];
    std::size_t n = 0;
    for (std::size_t start = 0;;) {
      auto comma = line.find(',', start);
      if (n == 5) throw bad("too many fields");
      fields[n++] = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != 5) throw bad("expected 5 fields");

    auto parse = [&](std::string_view f, auto& v) {
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw bad(fmt::format("invalid field '{}'", f));
      }
    };
    EpisodeRecord rec;
    int crashed = 0;
    parse(fields[0], rec.index);
    parse(fields[1], rec.steps);
    parse(fields[2], rec.cumulative_reward);
    parse(fields[3], rec.epsilon);
    parse(fields[4], crashed);
    if (crashed != 0 && crashed != 1) throw bad("crashed must be 0 or 1");
    rec.crashed = crashed == 1;
    out.push_back(rec);
  }
  if (line_no == 0) throw std::invalid_argument("run csv: missing header");
  return out;
}

std::string intervals_csv(std::span<const IntervalMean> intervals) {
  std::string out = "interval_start,interval_end,mean_reward\n";
  for (const auto& r : intervals) out += fmt::format("{},{},{:.17g}\n", r.start, r.end, r.mean);
  return out;
}

std::string intervals_table_csv(const std::vector<std::string>& names,
                                const std::vector<std::vector<IntervalMean>>& columns) {
  if (names.size() != columns.size() || columns.empty()) {
    throw std::invalid_argument("intervals_table_csv: need one name per column");
  }
  std::string out = "interval_start,interval_end";
  for (const auto& n : names) out += "," + n;
  out += '\n';
  const auto& first = columns.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    out += fmt::format("{},{}", first[i].start, first[i].end);
    for (const auto& col : columns) {
      if (col.size() != first.size() || col[i].start != first[i].start) {
        throw std::invalid_argument("intervals_table_csv: interval boundaries differ");
      }
      out += fmt::format(",{:.17g}", col[i].mean);
    }
    out += '\n';
  }
  return out;
}

// --- rollouts and throughput -----------------------------------------------

std::vector<RobotPose> greedy_rollout(Environment& env, const QTable& q, Rng& rng,
                                      int max_steps) {
  std::vector<RobotPose> path;
  DiscreteState obs = env.reset();
  path.push_back(env.pose());
  for (int i = 0; i < max_steps; ++i) {
    const StepResult res = env.step(choose_action(q, obs, 0.0, rng));
    path.push_back(env.pose());
    if (res.done) break;
    obs = res.observation;
  }
  return path;
}

Throughput measure_throughput(Environment& env, std::uint64_t steps, std::uint64_t seed) {
  Rng rng(seed);
  env.reset();
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (env.step(kAllActions[rng.uniform_index(kNumActions)]).done) env.reset();
  }
  const auto t1 = std::chrono::steady_clock::now();
  return {steps, std::chrono::duration<double>(t1 - t0).count()};
}

}  // namespace gymnav
