#include "gymnav/agents.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace gymnav {

std::string_view algorithm_name(Algorithm algo) {
  return algo == Algorithm::QLearning ? "qlearning" : "sarsa";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "qlearning") return Algorithm::QLearning;
  if (name == "sarsa") return Algorithm::Sarsa;
  return std::nullopt;
}

void AgentConfig::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(alpha)) throw std::invalid_argument("alpha must be in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  if (!in01(epsilon0)) throw std::invalid_argument("epsilon must be in [0, 1]");
  if (!in01(decay)) throw std::invalid_argument("decay must be in [0, 1]");
  if (!in01(eps_min)) throw std::invalid_argument("eps-min must be in [0, 1]");
}

// --- QTable ----------------------------------------------------------------

double QTable::get(std::string_view key, Action a) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? 0.0 : it->second.value[index_of(a)];
}

bool QTable::contains(std::string_view key, Action a) const {
  auto it = rows_.find(key);
  return it != rows_.end() && (it->second.present & (1u << index_of(a))) != 0;
}

void QTable::set(std::string_view key, Action a, double value) {
  auto it = rows_.find(key);
  if (it == rows_.end()) it = rows_.emplace(std::string(key), Row{}).first;
  Row& row = it->second;
  const auto bit = static_cast<std::uint8_t>(1u << index_of(a));
  if ((row.present & bit) == 0) {
    row.present |= bit;
    ++entries_;
  }
  row.value[index_of(a)] = value;
}

QTable::Values QTable::values(std::string_view key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? Values{} : it->second.value;
}

double QTable::max_value(std::string_view key) const {
  const Values v = values(key);
  return *std::max_element(v.begin(), v.end());
}

void QTable::for_each_sorted(
    const std::function<void(const std::string&, Action, double)>& fn) const {
  std::vector<const std::pair<const std::string, Row>*> sorted;
  sorted.reserve(rows_.size());
  for (const auto& kv : rows_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* l, const auto* r) { return l->first < r->first; });

  // Action names sort as Forward < Left < Right, the same as their indices.
  for (const auto* kv : sorted) {
    for (Action a : kAllActions) {
      if (kv->second.present & (1u << index_of(a))) fn(kv->first, a, kv->second.value[index_of(a)]);
    }
  }
}

std::string QTable::to_text() const {
  std::string out;
  out.reserve(entries_ * 32);
  for_each_sorted([&](const std::string& key, Action a, double v) {
    out += fmt::format("{} {} {:.17g}\n", key, action_name(a), v);
  });
  return out;
}

QTable QTable::from_text(std::string_view text) {
  QTable q;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string key, name, value, extra;
    if (!(fields >> key >> name >> value) || (fields >> extra)) {
      throw std::invalid_argument(fmt::format("qtable line {}: expected '<state> <action> <value>'", line_no));
    }
    auto action = parse_action(name);
    if (!action) {
      throw std::invalid_argument(fmt::format("qtable line {}: unknown action '{}'", line_no, name));
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
      throw std::invalid_argument(fmt::format("qtable line {}: invalid value '{}'", line_no, value));
    }
    if (q.contains(key, *action)) {
      throw std::invalid_argument(fmt::format("qtable line {}: duplicate entry", line_no));
    }
    q.set(key, *action, v);
  }
  return q;
}

void QTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  out << to_text();
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

QTable QTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

bool QTable::operator==(const QTable& other) const {
  if (entries_ != other.entries_ || rows_.size() != other.rows_.size()) return false;
  for (const auto& [key, row] : rows_) {
    auto it = other.rows_.find(key);
    if (it == other.rows_.end() || it->second.present != row.present) return false;
    for (std::size_t i = 0; i < kNumActions; ++i) {
      if ((row.present & (1u << i)) && row.value[i] != it->second.value[i]) return false;
    }
  }
  return true;
}

// --- policy and updates ----------------------------------------------------

Action choose_action(const QTable& q, std::string_view state, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return kAllActions[rng.uniform_index(kNumActions)];

  const QTable::Values v = q.values(state);
  const double best = *std::max_element(v.begin(), v.end());
  std::array<Action, kNumActions> ties{};
  std::size_t n = 0;
  for (Action a : kAllActions) {
    if (v[index_of(a)] == best) ties[n++] = a;
  }
  return n == 1 ? ties[0] : ties[rng.uniform_index(n)];
}

namespace {

void td_update(QTable& q, std::string_view s, Action a, double target, double alpha) {
  const double old = q.get(s, a);
  q.set(s, a, old + alpha * (target - old));
}

}  // namespace

void q_learning_update(QTable& q, std::string_view s, Action a, double reward,
                       std::string_view s_next, bool terminal, const AgentConfig& cfg) {
  const double target = terminal ? reward : reward + cfg.gamma * q.max_value(s_next);
  td_update(q, s, a, target, cfg.alpha);
}

void sarsa_update(QTable& q, std::string_view s, Action a, double reward,
                  std::string_view s_next, Action a_next, bool terminal, const AgentConfig& cfg) {
  const double target = terminal ? reward : reward + cfg.gamma * q.get(s_next, a_next);
  td_update(q, s, a, target, cfg.alpha);
}

double decay_epsilon(double epsilon, const AgentConfig& cfg) {
  return std::max(cfg.eps_min, epsilon * cfg.decay);
}

}  // namespace gymnav
