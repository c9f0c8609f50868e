#pragma once

// Batch jobs behind the `locsys` command line: config parsing, command
// dispatch and JSON/CSV report generation.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "locsys/words.hpp"

namespace locsys::app {

enum class Command { Enumerate, Lift, Cohom, Orbits, Verify };

std::optional<Command> parse_command(std::string_view name);
const char* command_name(Command c) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

/// Default cap on |GL_n(Z/p^k)|^r; LOCSYS_HARD_CAP overrides it.
inline constexpr std::uint64_t kDefaultHardCap = 100'000'000;

struct JobConfig {
  std::shared_ptr<const Presentation> pres;
  std::uint64_t p = 0;
  int k = 0;
  int n = 0;

  /// Target level for `lift`; 0 means k + 1.
  int levels = 0;
  /// Enumeration budget, or per-fiber sampling budget for `lift`.
  std::optional<std::uint64_t> budget;
  int workers = 1;
  bool deterministic = true;
};

/// Parse the TOML-style job file:
///
///   [group]
///   generators = ["a", "b"]
///   relators = ["a b a^-1 b^-1"]
///
///   [target]
///   p = 3
///   k = 1
///   n = 2
///
/// An optional [options] table accepts levels, budget, workers and
/// deterministic. Throws ParseError with file line/column.
JobConfig parse_config(std::string_view text);
JobConfig load_config(const std::string& path);

/// Hard cap from LOCSYS_HARD_CAP, or kDefaultHardCap.
std::uint64_t hard_cap();

struct RunResult {
  int exit_code = kExitOk;
  /// Primary JSON report.
  nlohmann::json report;
  /// Tabular summary.
  std::string csv;
  /// Human-readable one-line status.
  std::string message;
};

/// Run one command. Never throws for expected failures: they map to exit
/// codes 2 (config), 3 (budget) and 1 (verify violations).
RunResult run(const JobConfig& cfg, Command cmd);

/// Canonical byte serialization of a report.
std::string dump_report(const nlohmann::json& report);

}  // namespace locsys::app
