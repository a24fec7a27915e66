#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gymnav/environment.hpp"

namespace gymnav {

class UnknownEnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnvSpec {
  std::string id;
  std::string description;
  EnvConfig config;  // default configuration, world included
};

/// Environment ids mapped to their default configuration.
class Registry {
 public:
  Registry() = default;

  /// The four built-in Turtlebot worlds.
  static Registry builtin();

  /// builtin() plus every *.world file in $GYMNAV_WORLDS, if set.
  static Registry from_environment();

  /// Registers (or replaces) a spec. The config is validated first.
  void add(EnvSpec spec);

  /// Adds every *.world file in `dir` as `<Name>TurtlebotLidar-v0`.
  /// Returns the number of worlds loaded.
  std::size_t load_directory(const std::filesystem::path& dir);

  const EnvSpec& find(std::string_view id) const;
  bool contains(std::string_view id) const;
  Environment make(std::string_view id) const;

  /// Specs in lexicographic id order.
  std::vector<const EnvSpec*> list() const;
  std::size_t size() const { return specs_.size(); }

 private:
  std::map<std::string, EnvSpec, std::less<>> specs_;
};

/// Registry id derived from a world name: "maze" -> "MazeTurtlebotLidar-v0".
std::string env_id_for_world(std::string_view world_name);

/// make() against the process-wide registry (builtins plus $GYMNAV_WORLDS).
Environment make(std::string_view id);

/// Source text of the built-in world files, keyed by file stem.
const std::map<std::string, std::string, std::less<>>& builtin_world_sources();

}  // namespace gymnav
