#include "sleepcell/detect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sleepcell/error.hpp"

namespace sleepcell {

AnomalyScores
knn_scores (const Eigen::MatrixXd &train, const Eigen::MatrixXd &query,
            std::size_t k, bool query_is_train)
{
  if (k == 0)
    {
      throw ConfigError ("k must be >= 1");
    }
  if (train.cols () != query.cols ())
    {
      throw DataError ("train and query embeddings differ in dimension");
    }
  if (query_is_train && train.rows () != query.rows ())
    {
      throw DataError ("self-scoring needs the training set as query");
    }
  const auto n_train = static_cast<std::size_t> (train.rows ());
  const std::size_t available = query_is_train ? n_train - std::min<std::size_t> (n_train, 1)
                                               : n_train;
  if (k > available)
    {
      throw ConfigError ("k = " + std::to_string (k) + " exceeds the "
                         + std::to_string (available) + " available neighbours");
    }

  AnomalyScores out;
  out.k = k;
  out.self_excluded = query_is_train;
  out.values.resize (static_cast<std::size_t> (query.rows ()));

  const Eigen::Index dims = train.cols ();
  std::vector<double> sq;
  sq.reserve (n_train);
  for (Eigen::Index q = 0; q < query.rows (); ++q)
    {
      sq.clear ();
      for (Eigen::Index j = 0; j < train.rows (); ++j)
        {
          if (query_is_train && j == q)
            {
              continue;
            }
          double acc = 0.0;
          for (Eigen::Index c = 0; c < dims; ++c)
            {
              const double diff = query (q, c) - train (j, c);
              acc += diff * diff;
            }
          sq.push_back (acc);
        }
      auto kth = sq.begin () + static_cast<std::ptrdiff_t> (k);
      std::partial_sort (sq.begin (), kth, sq.end ());
      double sum = 0.0;
      for (auto it = sq.begin (); it != kth; ++it)
        {
          sum += std::sqrt (*it);
        }
      out.values[static_cast<std::size_t> (q)] = sum;
    }
  return out;
}

Threshold
fit_threshold (std::span<const double> train_scores, double percentile)
{
  if (train_scores.empty ())
    {
      throw DataError ("cannot fit a threshold on no scores");
    }
  if (!(percentile > 0.0 && percentile <= 100.0))
    {
      throw ConfigError ("percentile must be in (0, 100]");
    }
  std::vector<double> sorted (train_scores.begin (), train_scores.end ());
  std::sort (sorted.begin (), sorted.end ());
  const double rank = std::ceil (percentile / 100.0 * static_cast<double> (sorted.size ()) - 1e-12);
  const auto index = static_cast<std::size_t> (std::max (rank, 1.0)) - 1;
  return Threshold{sorted[std::min (index, sorted.size () - 1)], percentile};
}

std::vector<bool>
classify (std::span<const double> scores, const Threshold &threshold)
{
  std::vector<bool> out (scores.size ());
  for (std::size_t i = 0; i < scores.size (); ++i)
    {
      out[i] = scores[i] > threshold.value;
    }
  return out;
}

void
write_scores_csv (const std::filesystem::path &path, std::span<const double> scores,
                  const std::vector<bool> &anomalous)
{
  if (scores.size () != anomalous.size ())
    {
      throw DataError ("score and flag counts differ");
    }
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out.precision (17);
  out << "row,score,is_anomalous\n";
  for (std::size_t i = 0; i < scores.size (); ++i)
    {
      out << i << ',' << scores[i] << ',' << (anomalous[i] ? 1 : 0) << '\n';
    }
}

} // namespace sleepcell
