#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "proxdescent/core.hpp"
#include "proxdescent/solver.hpp"

namespace proxdescent::cli {

enum ExitCode { kOk = 0, kLoadError = 1, kMaxIters = 2, kSolverFailure = 3 };

int exit_code(SolverStatus s);

struct SolveOptions {
  std::filesystem::path instance;
  SolveConfig config;
  std::optional<std::filesystem::path> trace_out;
  std::optional<std::filesystem::path> report_out;
};

/// CSV trace with header k,obj,mu,d_norm,pred_decrease,actual_decrease,
/// crit_measure,signature,inner_rejections; one row per accepted step.
std::string trace_csv(const std::vector<IterateRecord>& trace);

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);

enum class CheckScope { Prox, Subproblem, Jacobian, All };

std::optional<CheckScope> parse_scope(const std::string& s);

struct CheckRow {
  std::string suite;
  std::string name;
  int cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<CheckRow> run_checks(CheckScope scope, const std::filesystem::path& data_dir);

int cmd_check(CheckScope scope, const std::filesystem::path& data_dir, std::ostream& out);

/// Full argument parsing and dispatch; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace proxdescent::cli
