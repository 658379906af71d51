#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "sleepcell/localize.hpp"

namespace sleepcell {

struct ConfusionCounts
{
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total () const { return tp + fp + tn + fn; }
  ConfusionCounts &operator+= (const ConfusionCounts &o);

  friend bool operator== (const ConfusionCounts &, const ConfusionCounts &) = default;
};

struct ConfusionMetrics
{
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double tnr = 0.0;
  double fpr = 0.0;
};

/// Cell-level counts of one labelled run against its set of faulty cells.
ConfusionCounts confusion (const CellLabels &labels, std::span<const CellId> faulty);

/// Precision is 1 with no predicted positives, recall is 1 with no actual
/// positives, F is 0 when both are 0. TNR is 1 and FPR 0 with no negatives.
ConfusionMetrics confusion_metrics (const ConfusionCounts &counts);

struct RocPoint
{
  double fpr = 0.0;
  double tpr = 0.0;
  /// Rows with score >= threshold are predicted positive.
  double threshold = 0.0;
};

struct RocCurve
{
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Sweeps the distinct scores from the top. Throws DataError unless both
/// classes are present.
RocCurve roc (std::span<const double> scores, const std::vector<bool> &positive);

void write_roc_csv (const std::filesystem::path &path, const RocCurve &curve);

/// x: sample std of the normalized scores without the top cell; y: top score.
struct HeuristicPoint
{
  double x = 0.0;
  double y = 0.0;
};

enum class Scenario
{
  Faulty,
  Clean,
};

std::string_view scenario_name (Scenario s);

HeuristicPoint heuristic_point (const SleepingCellHistogram &normalized);

/// Distance to (0, 100) for a faulty scenario, to (0, 100 / n_cells) for a
/// clean one.
double heuristic_distance (const SleepingCellHistogram &normalized,
                           Scenario scenario, std::size_t n_cells);

} // namespace sleepcell
