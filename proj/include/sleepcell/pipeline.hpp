#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sleepcell/config.hpp"
#include "sleepcell/dataset.hpp"
#include "sleepcell/detect.hpp"
#include "sleepcell/evaluate.hpp"
#include "sleepcell/localize.hpp"

namespace sleepcell {

/// The four methods followed by their combination.
inline constexpr std::size_t kOutputCount = 5;
inline constexpr std::size_t kCombined = 4;

std::string_view output_name (std::size_t output);
std::optional<std::size_t> output_from_name (std::string_view name);

/// Everything a fold needs from one dataset chunk.
struct FoldInput
{
  const Chunk *chunk = nullptr;
  const DominanceMap *dominance = nullptr;
  /// Fault labels of the chunk's dataset; may be null for training data.
  const FaultLabels *labels = nullptr;
};

/// What evaluation needs from one fold; also reloadable from disk.
struct FoldOutcome
{
  FoldPair pair;
  /// Normalized histograms with and without amplification, per output.
  std::array<SleepingCellHistogram, kOutputCount> amplified;
  std::array<SleepingCellHistogram, kOutputCount> unamplified;
  std::vector<double> test_scores;
  /// Sub-call contains at least one fault-affected event.
  std::vector<bool> test_truth;

  Scenario scenario () const;
};

struct FoldResult
{
  FoldOutcome outcome;
  std::size_t vocabulary_size = 0;
  std::size_t components = 0;
  Threshold threshold;
  std::vector<double> train_scores;
  std::vector<bool> test_anomalous;
  std::vector<SubCall> test_sub_calls;
  std::array<HistogramReport, 4> methods;
};

FoldResult run_fold (const RunConfig &config, const NetworkLayout &layout,
                     const FoldPair &pair, const FoldInput &train,
                     const FoldInput &test);

/// All 72 fold pairs: normal x problematic, then normal x reference.
std::vector<FoldPair> suite_fold_pairs (const DatasetSuite &suite);

FoldInput fold_input (const Dataset &dataset, std::size_t chunk);

/// Runs the given folds on up to `jobs` threads; results keep input order.
std::vector<FoldResult> run_folds (const RunConfig &config, const DatasetSuite &suite,
                                   std::span<const FoldPair> pairs,
                                   unsigned jobs = 1);

/// Evaluation of one output (method or combined) in one amplification mode.
struct OutputSummary
{
  std::string output;
  bool amplified = true;
  /// Pooled over every run of both scenarios.
  PooledStats stats;
  /// Per-cell means over the problematic / reference runs.
  CellLabels problematic;
  CellLabels reference;
  /// Per-run cell labels against `stats`, summed over runs.
  ConfusionCounts counts;
  ConfusionMetrics metrics;
  double distance_faulty = 0.0;
  double distance_clean = 0.0;
  std::size_t runs_faulty = 0;
  std::size_t runs_clean = 0;
};

struct SuiteSummary
{
  std::vector<OutputSummary> outputs;
  /// Mean sub-call ROC AUC over the problematic folds with both classes.
  double mean_auc = 0.0;
  std::size_t auc_folds = 0;
  /// Fold-pooled ROC of the problematic folds.
  RocCurve pooled_roc;

  const OutputSummary &find (std::string_view output, bool amplified) const;
};

SuiteSummary summarize (std::span<const FoldOutcome> folds, CellId faulty_cell,
                        std::size_t cell_count);

std::vector<FoldOutcome> outcomes_of (std::span<const FoldResult> results);

} // namespace sleepcell
