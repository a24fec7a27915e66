#include "gymnav/registry.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace gymnav {

namespace {

struct BuiltinEnv {
  std::string_view world;
  std::string_view description;
};

constexpr BuiltinEnv kBuiltins[] = {
    {"circuit", "rectangular loop with one diagonal wall"},
    {"circuit2", "straight tracks and 90-degree corners, five right and one left"},
    {"maze", "mixed wall shapes with narrow tracks"},
    {"round", "oval loop"},
};

}  // namespace

std::string env_id_for_world(std::string_view world_name) {
  std::string id(world_name);
  if (!id.empty()) id[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(id[0])));
  return id + "TurtlebotLidar-v0";
}

Registry Registry::builtin() {
  Registry reg;
  const auto& sources = builtin_world_sources();
  for (const auto& b : kBuiltins) {
    auto it = sources.find(b.world);
    if (it == sources.end()) {
      throw std::logic_error(fmt::format("built-in world '{}' was not embedded", b.world));
    }
    EnvConfig cfg;
    cfg.world = parse_world(it->second, fmt::format("{}.world", b.world));
    reg.add({env_id_for_world(cfg.world.name), std::string(b.description), std::move(cfg)});
  }
  return reg;
}

Registry Registry::from_environment() {
  Registry reg = builtin();
  if (const char* dir = std::getenv("GYMNAV_WORLDS"); dir != nullptr && *dir != '\0') {
    reg.load_directory(dir);
  }
  return reg;
}

void Registry::add(EnvSpec spec) {
  spec.config.validate();
  auto id = spec.id;
  specs_.insert_or_assign(std::move(id), std::move(spec));
}

std::size_t Registry::load_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".world") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    EnvConfig cfg;
    cfg.world = load_world(f);
    add({env_id_for_world(cfg.world.name), fmt::format("world file {}", f.filename().string()),
         std::move(cfg)});
  }
  return files.size();
}

bool Registry::contains(std::string_view id) const { return specs_.find(id) != specs_.end(); }

const EnvSpec& Registry::find(std::string_view id) const {
  auto it = specs_.find(id);
  if (it == specs_.end()) {
    std::vector<std::string_view> known;
    for (const auto& [k, _] : specs_) known.push_back(k);
    throw UnknownEnvError(
        fmt::format("unknown environment '{}'; known: {}", id, fmt::join(known, ", ")));
  }
  return it->second;
}

Environment Registry::make(std::string_view id) const { return Environment(find(id).config); }

std::vector<const EnvSpec*> Registry::list() const {
  std::vector<const EnvSpec*> out;
  out.reserve(specs_.size());
  for (const auto& [_, spec] : specs_) out.push_back(&spec);
  return out;
}

Environment make(std::string_view id) {
  static const Registry registry = Registry::from_environment();
  return registry.make(id);
}

}  // namespace gymnav
