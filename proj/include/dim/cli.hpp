#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dim/generate.hpp"
#include "dim/solver.hpp"

namespace dim {

enum ExitCode : int { kExitFound = 0, kExitNoDim = 1, kExitUsage = 2, kExitClassViolation = 3 };

/// Solve report with a top-level "schema": 1. Every timing lives under
/// "timings"; everything else is a function of the input and the flags.
nlohmann::ordered_json solve_report(const std::string& instance, const Graph& g,
                                    const SolveOptions& opts, const SolveOutcome& out,
                                    const SolveStats& stats, double seconds);

/// Patterns named like "diamond", "butterfly", "gem", "K4", "C4", "claw",
/// "s 1 2 4" or "S_{1,2,4}".
std::optional<ClassFilter> parse_filter(const std::string& text);

/// Worker count: DIM_SOLVER_THREADS when set to a positive integer, else
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Entry point of the `dim` tool; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dim
