#include "gymnav/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "gymnav/harness.hpp"
#include "gymnav/svg.hpp"

namespace gymnav::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kMaxRolloutSteps = 1500;

// Raised for failures that map onto exit status 1.
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  f.close();
  if (!f) throw IoFailure(fmt::format("cannot write {}", path.string()));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoFailure(fmt::format("cannot create output directory {}", dir.string()));
  }
}

struct TrainOptions {
  std::string env;
  std::string algo;
  int episodes = 3000;
  int max_steps = 1500;
  std::uint64_t seed = 0;
  AgentConfig agent;
  int interval = 200;
  int window = 100;
  std::string out;
};

void add_agent_flags(CLI::App* cmd, AgentConfig& agent) {
  cmd->add_option("--alpha", agent.alpha, "learning rate")->capture_default_str();
  cmd->add_option("--gamma", agent.gamma, "discount factor")->capture_default_str();
  cmd->add_option("--epsilon", agent.epsilon0, "initial exploration rate")->capture_default_str();
  cmd->add_option("--decay", agent.decay, "per-episode epsilon decay")->capture_default_str();
  cmd->add_option("--eps-min", agent.eps_min, "exploration floor")->capture_default_str();
}

void check_common(const Registry& registry, const std::string& env, int episodes, int max_steps,
                  const AgentConfig& agent, int interval, int window) {
  if (!registry.contains(env)) {
    try {
      registry.find(env);
    } catch (const UnknownEnvError& e) {
      throw UsageFailure(e.what());
    }
  }
  if (episodes < 1) throw UsageFailure("--episodes must be at least 1");
  if (max_steps < 1) throw UsageFailure("--max-steps must be at least 1");
  if (interval < 1) throw UsageFailure("--interval must be at least 1");
  if (window < 1) throw UsageFailure("--window must be at least 1");
  try {
    agent.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageFailure(e.what());
  }
}

int list_envs(const Registry& registry, std::ostream& out) {
  for (const EnvSpec* spec : registry.list()) {
    fmt::print(out, "{:<28} {:<10} {}\n", spec->id, spec->config.world.name, spec->description);
  }
  return kOk;
}

int train_cmd(const Registry& registry, const TrainOptions& o, std::ostream& out) {
  check_common(registry, o.env, o.episodes, o.max_steps, o.agent, o.interval, o.window);
  const auto algo = parse_algorithm(o.algo);
  if (!algo) throw UsageFailure(fmt::format("unknown algorithm '{}'", o.algo));

  const fs::path dir(o.out);
  ensure_dir(dir);
  const TrainResult res = train(registry, o.env, *algo, o.agent, o.episodes, o.max_steps, o.seed);
  const auto intervals = interval_averages(res.log, o.interval);

  write_file(dir / "run.csv", run_csv(res.log));
  write_file(dir / "intervals.csv", intervals_csv(intervals));
  write_file(dir / "curve.svg", svg::learning_curve(res.log, o.window));
  write_file(dir / "qtable.txt", res.qtable.to_text());

  fmt::print(out, "{} on {}: {} episodes, seed {}, {} q-table entries\n", o.algo, o.env,
             o.episodes, o.seed, res.qtable.size());
  for (const auto& r : intervals) fmt::print(out, "{:>6}-{:<6} {:>10.1f}\n", r.start, r.end, r.mean);
  return kOk;
}

struct BenchmarkOptions {
  TrainOptions train;
  int seeds = 5;
  int jobs = 1;
};

int benchmark_cmd(const Registry& registry, const BenchmarkOptions& o, std::ostream& out) {
  const auto& t = o.train;
  check_common(registry, t.env, t.episodes, t.max_steps, t.agent, t.interval, t.window);
  if (o.seeds < 1) throw UsageFailure("--seeds must be at least 1");
  if (o.jobs < 1) throw UsageFailure("--jobs must be at least 1");

  const fs::path dir(t.out);
  ensure_dir(dir);

  const Algorithm algos[] = {Algorithm::QLearning, Algorithm::Sarsa};
  std::vector<TrainJob> jobs;
  for (Algorithm a : algos) {
    for (int k = 0; k < o.seeds; ++k) {
      jobs.push_back({t.env, a, t.agent, t.episodes, t.max_steps, t.seed + static_cast<std::uint64_t>(k)});
    }
  }
  const auto results = train_all(registry, jobs, o.jobs);

  std::vector<std::string> names;
  std::vector<std::vector<IntervalMean>> columns;
  std::vector<svg::Series> curves;
  const auto n_episodes = static_cast<std::size_t>(t.episodes);
  for (std::size_t ai = 0; ai < std::size(algos); ++ai) {
    std::vector<IntervalMean> sum;
    std::vector<double> mean_curve(n_episodes, 0.0);
    for (int k = 0; k < o.seeds; ++k) {
      const auto& log = results[ai * o.seeds + k].log;
      write_file(dir / fmt::format("{}_seed{}.csv", algorithm_name(log.algorithm), log.seed),
                 run_csv(log));
      const auto iv = interval_averages(log, t.interval);
      if (sum.empty()) {
        sum = iv;
      } else {
        for (std::size_t i = 0; i < iv.size(); ++i) sum[i].mean += iv[i].mean;
      }
      for (std::size_t e = 0; e < n_episodes; ++e) mean_curve[e] += log.episodes[e].cumulative_reward;
    }
    for (auto& r : sum) r.mean /= o.seeds;
    for (auto& v : mean_curve) v /= o.seeds;
    names.emplace_back(algorithm_name(algos[ai]));
    columns.push_back(std::move(sum));
    curves.push_back({fmt::format("{} (mean of {} seeds, moving average {})",
                                  algorithm_name(algos[ai]), o.seeds, t.window),
                      moving_average(mean_curve, t.window), ai == 0 ? "blue" : "red", 2.0});
  }

  write_file(dir / "benchmark.csv", intervals_table_csv(names, columns));
  write_file(dir / "benchmark.svg",
             svg::plot(curves, fmt::format("Q-Learning vs Sarsa on {}", t.env)));

  const Comparison cmp = compare_intervals(columns[0], columns[1]);
  fmt::print(out, "Average cumulated reward per {}-episode interval on {} ({} seeds)\n",
             t.interval, t.env, o.seeds);
  out << format_comparison(cmp, names[0], names[1]);
  return kOk;
}

struct RenderOptions {
  std::string env;
  std::string qtable;
  std::uint64_t seed = 0;
  std::string out;
};

int render_cmd(const Registry& registry, const RenderOptions& o) {
  if (!registry.contains(o.env)) {
    try {
      registry.find(o.env);
    } catch (const UnknownEnvError& e) {
      throw UsageFailure(e.what());
    }
  }
  Environment env = registry.make(o.env);
  std::vector<RobotPose> path;
  if (!o.qtable.empty()) {
    QTable q;
    try {
      q = QTable::load(o.qtable);
    } catch (const std::exception& e) {
      throw IoFailure(fmt::format("{}: {}", o.qtable, e.what()));
    }
    Rng rng(o.seed);
    path = greedy_rollout(env, q, rng, kMaxRolloutSteps);
  }
  const fs::path out(o.out);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  write_file(out, svg::world(env.config().world, path));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, const Registry& registry, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"gymnav: tabular reinforcement learning for a simulated LIDAR robot", "gymnav"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list-envs", "List registered environments");

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Train one agent and write its run artifacts");
  train->add_option("--env", train_opts.env, "environment id")->required();
  train->add_option("--algo", train_opts.algo, "qlearning or sarsa")->required();
  train->add_option("--episodes", train_opts.episodes)->capture_default_str();
  train->add_option("--max-steps", train_opts.max_steps)->capture_default_str();
  train->add_option("--seed", train_opts.seed)->capture_default_str();
  add_agent_flags(train, train_opts.agent);
  train->add_option("--interval", train_opts.interval, "episodes per averaged interval")
      ->capture_default_str();
  train->add_option("--window", train_opts.window, "moving-average window for curve.svg")
      ->capture_default_str();
  train->add_option("--out", train_opts.out, "output directory")->required();

  BenchmarkOptions bench_opts;
  auto& bt = bench_opts.train;
  bt.seed = 1;
  auto* bench = app.add_subcommand("benchmark", "Compare Q-Learning and Sarsa over several seeds");
  bench->add_option("--env", bt.env, "environment id")->required();
  bench->add_option("--episodes", bt.episodes)->capture_default_str();
  bench->add_option("--max-steps", bt.max_steps)->capture_default_str();
  bench->add_option("--seeds", bench_opts.seeds, "number of seeds per algorithm")
      ->capture_default_str();
  bench->add_option("--seed", bt.seed, "first seed")->capture_default_str();
  bench->add_option("--jobs", bench_opts.jobs, "parallel training jobs")->capture_default_str();
  add_agent_flags(bench, bt.agent);
  bench->add_option("--interval", bt.interval)->capture_default_str();
  bench->add_option("--window", bt.window)->capture_default_str();
  bench->add_option("--out", bt.out, "output directory")->required();

  RenderOptions render_opts;
  auto* render = app.add_subcommand("render", "Draw a world, optionally with a greedy rollout");
  render->add_option("--env", render_opts.env, "environment id")->required();
  render->add_option("--qtable", render_opts.qtable, "q-table text file");
  render->add_option("--seed", render_opts.seed, "tie-breaking seed")->capture_default_str();
  render->add_option("--out", render_opts.out, "output SVG path")->required();

  // CLI11 wants argv order reversed when handed a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kUsageError;
  }

  try {
    if (list_cmd->parsed()) return list_envs(registry, out);
    if (train->parsed()) return train_cmd(registry, train_opts, out);
    if (bench->parsed()) return benchmark_cmd(registry, bench_opts, out);
    if (render->parsed()) return render_cmd(registry, render_opts);
  } catch (const UsageFailure& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kIoError;
  }
  return kUsageError;
}

}  // namespace gymnav::cli
