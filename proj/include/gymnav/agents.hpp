#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gymnav/environment.hpp"
#include "gymnav/rng.hpp"

namespace gymnav {

enum class Algorithm { QLearning, Sarsa };

std::string_view algorithm_name(Algorithm algo);  // "qlearning" / "sarsa"
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct AgentConfig {
  double alpha = 0.2;
  double gamma = 0.9;
  double epsilon0 = 0.9;
  double decay = 0.9986;
  double eps_min = 0.05;

  /// Throws std::invalid_argument on alpha/epsilon outside [0,1], gamma
  /// outside [0,1), or a decay/floor outside [0,1].
  void validate() const;
};

/// Action values keyed by (state key, action). Absent entries read as 0 and
/// reads never insert.
class QTable {
 public:
  using Values = std::array<double, kNumActions>;

  double get(std::string_view key, Action a) const;
  void set(std::string_view key, Action a, double value);
  bool contains(std::string_view key, Action a) const;

  /// All three action values of a state (zeros where absent).
  Values values(std::string_view key) const;
  double max_value(std::string_view key) const;

  /// Number of (state, action) entries written so far.
  std::size_t size() const { return entries_; }
  std::size_t num_states() const { return rows_.size(); }

  /// Visits entries in lexicographic (key, action name) order.
  void for_each_sorted(
      const std::function<void(const std::string&, Action, double)>& fn) const;

  /// `<state key> <action name> <value>` lines, sorted, values with 17
  /// significant digits.
  std::string to_text() const;
  static QTable from_text(std::string_view text);  // throws std::invalid_argument

  void save(const std::filesystem::path& path) const;
  static QTable load(const std::filesystem::path& path);

  bool operator==(const QTable& other) const;

 private:
  struct Row {
    Values value{};
    std::uint8_t present = 0;  // bit i set when action i has been written
  };
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::unordered_map<std::string, Row, KeyHash, std::equal_to<>> rows_;
  std::size_t entries_ = 0;
};

/// Epsilon-greedy selection. Draws once for explore/exploit, then once more
/// whenever it picks among two or more candidates (the random action, or
/// tied maxima).
Action choose_action(const QTable& q, std::string_view state, double epsilon, Rng& rng);
inline Action choose_action(const QTable& q, const DiscreteState& state, double epsilon,
                            Rng& rng) {
  return choose_action(q, state.key(), epsilon, rng);
}

/// Off-policy TD update toward r + gamma * max_a' q(s', a'), or r when terminal.
void q_learning_update(QTable& q, std::string_view s, Action a, double reward,
                       std::string_view s_next, bool terminal, const AgentConfig& cfg);

/// On-policy TD update toward r + gamma * q(s', a'), or r when terminal.
void sarsa_update(QTable& q, std::string_view s, Action a, double reward,
                  std::string_view s_next, Action a_next, bool terminal, const AgentConfig& cfg);

/// max(eps_min, epsilon * decay).
double decay_epsilon(double epsilon, const AgentConfig& cfg);

}  // namespace gymnav
