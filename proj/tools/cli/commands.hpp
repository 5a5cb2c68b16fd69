#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/report.hpp"

namespace possib::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;

/// Flags shared by every command. Flag values take precedence over the
/// scenario file, which takes precedence over built-in defaults.
struct GlobalOptions {
  std::optional<std::size_t> horizon;
  std::optional<std::vector<double>> eps;
  std::optional<std::uint64_t> seed;
  bool force = false;
  bool timestamp = true;
  std::vector<std::string> argv;  // echoed into the report
};

struct EvalOptions {
  std::optional<std::size_t> k;
  std::optional<std::string> event;  // comma-separated labels; "" is the empty event
};

struct ChebyshevOptions {
  std::size_t k = 1;
  std::vector<double> r_grid{0.1, 0.5, 1.0, 3.0, 10.0};
};

struct LlnOptions {
  std::optional<std::string> theorem;
  std::optional<double> delta;
  std::optional<double> constant;
  std::optional<std::string> psi_family;
  std::optional<double> psi_delta;
  std::optional<double> psi_scale;
  bool per_term = false;
};

struct CommandResult {
  ReportDocument document;
  int exit_code = kExitOk;
};

/// Each command loads the scenario, applies the global overrides and builds a
/// report. Input problems surface as possib::Error exceptions.
CommandResult run_eval(const std::string& scenario_path, const EvalOptions& opts, const GlobalOptions& global);
CommandResult run_chebyshev(const std::string& scenario_path, const ChebyshevOptions& opts,
                            const GlobalOptions& global);
CommandResult run_lln(const std::string& scenario_path, const LlnOptions& opts, const GlobalOptions& global);
CommandResult run_converge(const std::string& scenario_path, const GlobalOptions& global);

std::vector<double> parse_number_list(const std::string& text);
std::string tool_version();

}  // namespace possib::cli
