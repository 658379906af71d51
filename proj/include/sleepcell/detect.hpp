#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sleepcell {

struct AnomalyScores
{
  std::vector<double> values;
  std::size_t k = 0;
  /// True when the query set was the training set itself.
  bool self_excluded = false;
};

/// Sum of the Euclidean distances from each query row to its `k` nearest
/// training rows. With `query_is_train` row i never counts itself.
/// Throws ConfigError when k is 0 or exceeds the available neighbours.
AnomalyScores knn_scores (const Eigen::MatrixXd &train,
                          const Eigen::MatrixXd &query, std::size_t k,
                          bool query_is_train = false);

struct Threshold
{
  double value = 0.0;
  double percentile = 95.0;
};

/// Nearest-rank percentile: sorted[ceil(p/100 * n) - 1].
Threshold fit_threshold (std::span<const double> train_scores,
                         double percentile = 95.0);

/// Anomalous iff score > threshold.
std::vector<bool> classify (std::span<const double> scores,
                            const Threshold &threshold);

void write_scores_csv (const std::filesystem::path &path,
                       std::span<const double> scores,
                       const std::vector<bool> &anomalous);

} // namespace sleepcell
