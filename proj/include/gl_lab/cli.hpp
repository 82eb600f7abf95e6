#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gl_lab/config.hpp"

namespace gl_lab {

/// Command-line overrides applied on top of the parsed config document.
struct CliOverrides {
  std::optional<std::string> command;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

/// Reads and parses the config file, then applies the overrides.
RunConfig load_config(const std::string& path, const CliOverrides& overrides);

/// Executes the configured command and emits its results. Returns 0 on
/// success; solver non-convergence inside a sweep never fails the process.
int run_command(const RunConfig& config);

}  // namespace gl_lab
