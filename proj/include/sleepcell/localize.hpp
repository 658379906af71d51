#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sleepcell/featurize.hpp"
#include "sleepcell/layout.hpp"
#include "sleepcell/radio.hpp"

namespace sleepcell {

enum class Method
{
  Subcall,  // dominance sub-call deviation
  TwoGram,  // dominance 2-gram deviation
  Symmetry, // 2-gram symmetry deviation
  Target,   // target cell sub-calls
};

inline constexpr std::array<Method, 4> kAllMethods = {
  Method::Subcall, Method::TwoGram, Method::Symmetry, Method::Target,
};

std::string_view method_name (Method m);
std::optional<Method> method_from_name (std::string_view name);

enum class HistogramStage
{
  Raw,
  Amplified,
  Normalized,
};

/// One score per cell, in layout order.
struct SleepingCellHistogram
{
  std::vector<CellId> cells;
  std::vector<double> scores;
  HistogramStage stage = HistogramStage::Raw;

  static SleepingCellHistogram zeros (std::span<const CellId> cells);
  double sum () const;
  /// Index of the largest score; the first one on ties.
  std::size_t argmax () const;
  double score_of (CellId cell) const;
};

/// Which sub-calls the dominance 2-gram deviation compares.
enum class TwoGramScope
{
  Anomalous,           // anomalous test vs anomalous train sub-calls
  AnomalousVsAllTrain, // anomalous test vs all train sub-calls
  All,                 // all test vs all train sub-calls
};

std::string_view scope_name (TwoGramScope s);
std::optional<TwoGramScope> scope_from_name (std::string_view name);

enum class SymmetryMode
{
  PerTwoGram, // imbalance per 2-gram type, summed
  Pooled,     // imbalance of all border-crossing 2-grams together
};

std::string_view symmetry_name (SymmetryMode s);
std::optional<SymmetryMode> symmetry_from_name (std::string_view name);

/// Everything the post-processing methods need to know about one side of a
/// fold.
struct FoldSide
{
  std::span<const Call> calls;
  std::span<const SubCall> sub_calls;
  /// One flag per sub-call.
  std::vector<bool> anomalous;
  /// Divisor for per-UE frequencies.
  std::size_t ue_count = 0;
  const DominanceMap *dominance = nullptr;

  void validate () const;
};

/// Cell whose dominance area contains the record's location.
CellId dominant_cell (const DominanceMap &dominance, const MdtRecord &record);

SleepingCellHistogram sc_dominance_subcall_deviation (const NetworkLayout &layout,
                                                      const FoldSide &train,
                                                      const FoldSide &test);

SleepingCellHistogram sc_dominance_2gram_deviation (
  const NetworkLayout &layout, const FoldSide &train, const FoldSide &test,
  TwoGramScope scope = TwoGramScope::AnomalousVsAllTrain);

SleepingCellHistogram sc_2gram_symmetry_deviation (
  const NetworkLayout &layout, const FoldSide &train, const FoldSide &test,
  SymmetryMode mode = SymmetryMode::PerTwoGram);

/// Uses target cell ids only; no locations or dominance map.
SleepingCellHistogram sc_target_cell_subcalls (const NetworkLayout &layout,
                                               const FoldSide &test);

inline constexpr double kAmplifyEpsilon = 1e-9;

/// h(c) divided by the summed score of cells that are neither c nor its
/// neighbours.
SleepingCellHistogram amplify (const SleepingCellHistogram &h,
                               const NetworkLayout &layout,
                               double epsilon = kAmplifyEpsilon);

/// Scales to a total of 100; an all-zero histogram becomes uniform.
SleepingCellHistogram normalize (const SleepingCellHistogram &h);

/// Weighted mean of histograms over the same cells, re-normalised.
SleepingCellHistogram combine (std::span<const SleepingCellHistogram> histograms,
                               std::span<const double> weights = {});

struct PooledStats
{
  double mean = 0.0;
  double sigma = 0.0;

  double threshold () const { return mean + 3.0 * sigma; }
};

/// Mean and population standard deviation over every (run, cell) score.
PooledStats pooled_stats (std::span<const SleepingCellHistogram> runs);

struct CellLabels
{
  std::vector<CellId> cells;
  /// Per-cell mean over the labelled runs.
  std::vector<double> mean_scores;
  std::vector<bool> abnormal;
  PooledStats stats;

  std::vector<CellId> abnormal_cells () const;
};

/// Pools the runs for mean and sigma, then labels each cell by its mean score.
CellLabels label_cells (std::span<const SleepingCellHistogram> runs);

/// Labels by the cells' mean over `runs` against externally pooled stats.
CellLabels label_cells (std::span<const SleepingCellHistogram> runs,
                        const PooledStats &stats);

/// One histogram through all stages, for reporting.
struct HistogramReport
{
  SleepingCellHistogram raw;
  SleepingCellHistogram amplified;
  SleepingCellHistogram normalized;
  SleepingCellHistogram normalized_unamplified;
};

HistogramReport process_histogram (const SleepingCellHistogram &raw,
                                   const NetworkLayout &layout);

/// Columns: cell_id,raw,amplified,normalized,normalized_unamplified,label.
/// Label is empty when `labels` is not given.
void write_histogram_csv (const std::filesystem::path &path,
                          const HistogramReport &report,
                          const CellLabels *labels = nullptr);

/// Heat map: one spot per cell, placed off its site along the boresight;
/// darker and larger for higher normalized scores.
void write_heatmap_svg (const std::filesystem::path &path,
                        const NetworkLayout &layout,
                        const SleepingCellHistogram &normalized,
                        std::string_view title = {});

} // namespace sleepcell
