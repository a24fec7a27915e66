#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gymnav/registry.hpp"

namespace gymnav::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsageError = 2 };

/// Runs one invocation (`args` excludes the program name) against `registry`.
/// Subcommands: list-envs, train, benchmark, render.
int run(const std::vector<std::string>& args, const Registry& registry, std::ostream& out,
        std::ostream& err);

}  // namespace gymnav::cli
