#include "sleepcell/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "sleepcell/embed.hpp"
#include "sleepcell/error.hpp"
#include "sleepcell/featurize.hpp"

namespace sleepcell {

namespace {

constexpr std::array<std::string_view, kOutputCount> kOutputNames = {
  "subcall", "2gram", "symmetry", "target", "combined",
};

std::vector<bool>
fault_truth (std::span<const SubCall> sub_calls, const FaultLabels *labels)
{
  std::vector<bool> out (sub_calls.size (), false);
  if (!labels)
    {
      return out;
    }
  for (std::size_t i = 0; i < sub_calls.size (); ++i)
    {
      const auto &s = sub_calls[i];
      for (std::size_t j = 0; j < s.records.size (); ++j)
        {
          if (labels->affected (s.ue, s.offset + j))
            {
              out[i] = true;
              break;
            }
        }
    }
  return out;
}

} // namespace

std::string_view
output_name (std::size_t output)
{
  return kOutputNames.at (output);
}

std::optional<std::size_t>
output_from_name (std::string_view name)
{
  for (std::size_t i = 0; i < kOutputCount; ++i)
    {
      if (kOutputNames[i] == name)
        {
          return i;
        }
    }
  return std::nullopt;
}

Scenario
FoldOutcome::scenario () const
{
  return pair.test_role == DatasetRole::Problematic ? Scenario::Faulty : Scenario::Clean;
}

FoldResult
run_fold (const RunConfig &config, const NetworkLayout &layout, const FoldPair &pair,
          const FoldInput &train, const FoldInput &test)
{
  if (!train.chunk || !test.chunk || !train.dominance || !test.dominance)
    {
      throw DataError ("fold input is incomplete");
    }
  const auto train_sub = sliding_window (train.chunk->calls, config.window, config.step);
  auto test_sub = sliding_window (test.chunk->calls, config.window, config.step);
  if (train_sub.size () < config.k + 1)
    {
      throw DataError ("training chunk " + std::to_string (pair.train_index) + " has "
                       + std::to_string (train_sub.size ())
                       + " sub-calls, too few for k = " + std::to_string (config.k));
    }
  if (test_sub.empty ())
    {
      throw DataError ("testing chunk " + std::to_string (pair.test_index)
                       + " has no sub-calls");
    }

  const auto vocabulary = build_vocabulary (train_sub, test_sub, config.ngram);
  const auto x_train = build_feature_matrix (train_sub, vocabulary);
  const auto x_test = build_feature_matrix (test_sub, vocabulary);
  const auto basis = fit_basis (x_train.counts);

  std::size_t d = config.components;
  if (config.auto_components && basis.dimension () >= 4)
    {
      d = sorte_select (basis.eigenvalues, config.components);
    }
  d = std::min (d, basis.dimension ());

  const auto e_train = project_minor (basis, x_train.counts, d);
  const auto e_test = project_minor (basis, x_test.counts, d);

  FoldResult r;
  r.vocabulary_size = vocabulary.size ();
  r.components = d;
  r.train_scores = knn_scores (e_train.coordinates, e_train.coordinates, config.k, true).values;
  const auto test_scores = knn_scores (e_train.coordinates, e_test.coordinates, config.k).values;
  r.threshold = fit_threshold (r.train_scores, config.percentile);
  const auto train_anomalous = classify (r.train_scores, r.threshold);
  r.test_anomalous = classify (test_scores, r.threshold);

  FoldSide train_side{train.chunk->calls, train_sub, train_anomalous,
                      train.chunk->calls.size (), train.dominance};
  FoldSide test_side{test.chunk->calls, test_sub, r.test_anomalous,
                     test.chunk->calls.size (), test.dominance};

  const std::array<SleepingCellHistogram, 4> raw = {
    sc_dominance_subcall_deviation (layout, train_side, test_side),
    sc_dominance_2gram_deviation (layout, train_side, test_side, config.twogram_scope),
    sc_2gram_symmetry_deviation (layout, train_side, test_side, config.symmetry_mode),
    sc_target_cell_subcalls (layout, test_side),
  };

  auto &o = r.outcome;
  o.pair = pair;
  for (std::size_t m = 0; m < raw.size (); ++m)
    {
      r.methods[m] = process_histogram (raw[m], layout);
      o.amplified[m] = r.methods[m].normalized;
      o.unamplified[m] = r.methods[m].normalized_unamplified;
    }
  o.amplified[kCombined]
    = combine (std::span<const SleepingCellHistogram> (o.amplified.data (), 4), config.weights);
  o.unamplified[kCombined]
    = combine (std::span<const SleepingCellHistogram> (o.unamplified.data (), 4), config.weights);
  o.test_scores = test_scores;
  o.test_truth = fault_truth (test_sub, test.labels);
  r.test_sub_calls = std::move (test_sub);
  return r;
}

std::vector<FoldPair>
suite_fold_pairs (const DatasetSuite &suite)
{
  auto pairs = make_fold_pairs (suite.normal.chunks, suite.problematic.chunks);
  const auto reference = make_fold_pairs (suite.normal.chunks, suite.reference.chunks);
  pairs.insert (pairs.end (), reference.begin (), reference.end ());
  return pairs;
}

FoldInput
fold_input (const Dataset &dataset, std::size_t chunk)
{
  if (chunk >= dataset.chunks.size ())
    {
      throw DataError ("chunk " + std::to_string (chunk) + " of "
                       + std::string (role_name (dataset.role)) + " does not exist");
    }
  return FoldInput{&dataset.chunks[chunk], &dataset.dominance,
                   dataset.labels.empty () ? nullptr : &dataset.labels};
}

std::vector<FoldResult>
run_folds (const RunConfig &config, const DatasetSuite &suite,
           std::span<const FoldPair> pairs, unsigned jobs)
{
  std::vector<FoldResult> results (pairs.size ());
  std::vector<std::exception_ptr> errors (pairs.size ());
  std::atomic<std::size_t> next{0};
  auto worker = [&] () {
    for (std::size_t i = next++; i < pairs.size (); i = next++)
      {
        try
          {
            const auto &p = pairs[i];
            results[i] = run_fold (config, suite.layout, p,
                                   fold_input (suite.normal, p.train_index),
                                   fold_input (suite.get (p.test_role), p.test_index));
          }
        catch (...)
          {
            errors[i] = std::current_exception ();
          }
      }
  };
  const unsigned threads = std::max (1u, std::min<unsigned> (jobs, static_cast<unsigned> (pairs.size ())));
  if (threads == 1)
    {
      worker ();
    }
  else
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t)
        {
          pool.emplace_back (worker);
        }
    }
  for (const auto &e : errors)
    {
      if (e)
        {
          std::rethrow_exception (e);
        }
    }
  return results;
}

std::vector<FoldOutcome>
outcomes_of (std::span<const FoldResult> results)
{
  std::vector<FoldOutcome> out;
  out.reserve (results.size ());
  for (const auto &r : results)
    {
      out.push_back (r.outcome);
    }
  return out;
}

const OutputSummary &
SuiteSummary::find (std::string_view output, bool amplified) const
{
  for (const auto &o : outputs)
    {
      if (o.output == output && o.amplified == amplified)
        {
          return o;
        }
    }
  throw DataError ("no summary for output '" + std::string (output) + "'");
}

SuiteSummary
summarize (std::span<const FoldOutcome> folds, CellId faulty_cell, std::size_t cell_count)
{
  if (folds.empty ())
    {
      throw DataError ("no folds to summarize");
    }
  SuiteSummary summary;
  const std::array<CellId, 1> faulty = {faulty_cell};

  for (std::size_t o = 0; o < kOutputCount; ++o)
    {
      for (const bool amplified : {true, false})
        {
          std::vector<SleepingCellHistogram> all;
          std::vector<SleepingCellHistogram> problematic;
          std::vector<SleepingCellHistogram> reference;
          for (const auto &f : folds)
            {
              const auto &h = amplified ? f.amplified[o] : f.unamplified[o];
              all.push_back (h);
              (f.scenario () == Scenario::Faulty ? problematic : reference).push_back (h);
            }
          OutputSummary s;
          s.output = std::string (output_name (o));
          s.amplified = amplified;
          s.stats = pooled_stats (all);
          if (!problematic.empty ())
            {
              s.problematic = label_cells (problematic, s.stats);
            }
          if (!reference.empty ())
            {
              s.reference = label_cells (reference, s.stats);
            }
          for (const auto &f : folds)
            {
              const auto &h = amplified ? f.amplified[o] : f.unamplified[o];
              const auto labels = label_cells (std::span<const SleepingCellHistogram> (&h, 1),
                                               s.stats);
              const bool is_faulty = f.scenario () == Scenario::Faulty;
              s.counts += confusion (labels, is_faulty ? std::span<const CellId> (faulty)
                                                       : std::span<const CellId> ());
              const double dist = heuristic_distance (h, f.scenario (), cell_count);
              if (is_faulty)
                {
                  s.distance_faulty += dist;
                  ++s.runs_faulty;
                }
              else
                {
                  s.distance_clean += dist;
                  ++s.runs_clean;
                }
            }
          s.metrics = confusion_metrics (s.counts);
          summary.outputs.push_back (std::move (s));
        }
    }

  std::vector<double> pooled_scores;
  std::vector<bool> pooled_truth;
  double auc_sum = 0.0;
  for (const auto &f : folds)
    {
      if (f.scenario () != Scenario::Faulty)
        {
          continue;
        }
      pooled_scores.insert (pooled_scores.end (), f.test_scores.begin (), f.test_scores.end ());
      pooled_truth.insert (pooled_truth.end (), f.test_truth.begin (), f.test_truth.end ());
      const auto pos = std::count (f.test_truth.begin (), f.test_truth.end (), true);
      if (pos == 0 || pos == static_cast<std::ptrdiff_t> (f.test_truth.size ()))
        {
          continue;
        }
      auc_sum += roc (f.test_scores, f.test_truth).auc;
      ++summary.auc_folds;
    }
  if (summary.auc_folds > 0)
    {
      summary.mean_auc = auc_sum / static_cast<double> (summary.auc_folds);
      summary.pooled_roc = roc (pooled_scores, pooled_truth);
    }
  return summary;
}

} // namespace sleepcell
