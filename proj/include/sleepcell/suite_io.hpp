#pragma once

#include <filesystem>
#include <string>

#include "sleepcell/config.hpp"
#include "sleepcell/dataset.hpp"

namespace sleepcell {

/// File name of one chunk, e.g. "problematic_chunk_3.jsonl".
std::string chunk_file_name (DatasetRole role, int index);

/// Writes config.json, the per-role chunk logs, dominance maps and ground
/// truth, and manifest.json. `dir` is created; its parent must exist.
void write_suite (const std::filesystem::path &dir, const DatasetSuite &suite,
                  const RunConfig &config);

struct LoadedSuite
{
  RunConfig config;
  DatasetSuite suite;
};

/// Reads a directory produced by write_suite. The layout is rebuilt from the
/// stored config.
LoadedSuite load_suite (const std::filesystem::path &dir);

} // namespace sleepcell
