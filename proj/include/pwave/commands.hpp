#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwave/config.hpp"
#include "pwave/report.hpp"

namespace pwave {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheck = 4;

struct CommandOutput {
  Report report;
  /// Extra files (name, contents), e.g. CSV tables.
  std::vector<std::pair<std::string, std::string>> files;
  /// Human-readable lines for the terminal.
  std::vector<std::string> lines;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand; module errors propagate as pwave::Error.
CommandOutput run_command(const std::string& subcommand, const RunConfig& cfg);

struct RunOptions {
  std::optional<std::string> output_dir;
  bool quiet = false;
};

/// Runs, writes <subcommand>.json, <subcommand>.payload.json and any extra files,
/// prints a summary and returns the exit code.
int execute(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opts, std::ostream& out,
            std::ostream& err);

}  // namespace pwave
