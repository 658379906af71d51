#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sleepcell/dataset.hpp"
#include "sleepcell/localize.hpp"

namespace sleepcell {

/// Every tunable of a simulate + detect + evaluate run.
struct RunConfig
{
  SuiteConfig suite;

  std::size_t window = 15;
  std::size_t step = 10;
  std::size_t ngram = 2;

  /// Fixed minor-component count; also the SORTE fallback.
  std::size_t components = 6;
  bool auto_components = false;

  std::size_t k = 35;
  double percentile = 95.0;

  /// subcall, 2gram, symmetry, target.
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};
  bool amplify = true;
  TwoGramScope twogram_scope = TwoGramScope::AnomalousVsAllTrain;
  SymmetryMode symmetry_mode = SymmetryMode::PerTwoGram;

  void validate () const;
};

nlohmann::ordered_json to_json (const RunConfig &config);

/// Missing keys keep their defaults; unknown keys and bad values throw
/// ConfigError.
RunConfig run_config_from_json (const nlohmann::json &j);

RunConfig load_config (const std::filesystem::path &path);
void save_config (const std::filesystem::path &path, const RunConfig &config);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash (const RunConfig &config);

std::uint64_t fnv1a64 (std::string_view bytes);

} // namespace sleepcell
