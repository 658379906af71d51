#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sleepcell/config.hpp"
#include "sleepcell/pipeline.hpp"

namespace sleepcell {

enum ExitCode
{
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
};

/// Subcommand entry point shared by the tool and the tests.
int run_cli (int argc, char **argv, std::ostream &out, std::ostream &err);

/// Output indices selected by a --method value ("all" selects every output).
std::vector<std::size_t> outputs_for_method (const std::string &method);

void cmd_simulate (const RunConfig &config, const std::filesystem::path &out_dir,
                   std::ostream &log);

struct DetectOptions
{
  std::filesystem::path data_dir;
  std::filesystem::path out_dir;
  /// Detection parameters; the simulation section always comes from the data.
  std::optional<RunConfig> config;
  /// Run only the first N selected folds.
  std::optional<std::size_t> folds;
  /// "all", "problematic" or "reference".
  std::string role = "all";
  unsigned jobs = 1;
  std::vector<std::size_t> outputs;
  std::optional<bool> amplify;
};

void cmd_detect (const DetectOptions &options, std::ostream &log);

struct EvaluateOptions
{
  std::filesystem::path out_dir;
  std::vector<std::size_t> outputs;
  /// Report the non-amplified variant only.
  bool unamplified_only = false;
};

void cmd_evaluate (const EvaluateOptions &options, std::ostream &log);

void cmd_report (const std::filesystem::path &out_dir, std::ostream &out);

/// Name of a fold's output directory, e.g. "problematic_2_5".
std::string fold_name (const FoldPair &pair);

/// Reloads what evaluation needs from a fold directory written by detect.
FoldOutcome read_fold_outcome (const std::filesystem::path &fold_dir);

} // namespace sleepcell
