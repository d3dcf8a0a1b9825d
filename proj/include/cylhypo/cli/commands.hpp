#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cylhypo/cli/config.hpp"
#include "cylhypo/cli/report.hpp"

namespace cylhypo::cli {

inline const std::vector<std::string> kCommands = {"classify", "zeros",          "solve",  "spectrum",
                                                   "fit-decay", "counterexample", "reduce", "verify-lemmas"};

/// Built-in input by name, sampled on the grid.
GridFunction test_function(const std::string& name, const CylinderGrid& grid);

/// Reads t,x,re,im rows in row-major order; the row count must match the grid.
GridFunction read_grid_csv(const std::string& path, const CylinderGrid& grid);

struct CommandOutput {
  json body;
  /// Extra artifacts: file name relative to the output dir, content.
  std::vector<std::pair<std::string, std::string>> files;
  /// verify-lemmas reports failures through the exit code.
  bool ok = true;
};

/// Runs a command without touching the file system. Throws cylhypo::Error.
CommandOutput run_command(const std::string& cmd, const RunConfig& cfg);

/// Full CLI: argument parsing, dispatch, atomic writes, exit codes
/// (0 success, 1 mathematical refusal, 2 usage error).
int main_entry(int argc, char** argv);

}  // namespace cylhypo::cli
