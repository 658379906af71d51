#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "sleepcell/error.hpp"
#include "sleepcell/pipeline.hpp"

using namespace sleepcell;

namespace {

RunConfig
small_config ()
{
  RunConfig c;
  c.suite.sim.duration_steps = 1500;
  return c;
}

const DatasetSuite &
small_suite ()
{
  static const DatasetSuite s = generate_dataset_suite (small_config ().suite);
  return s;
}

double
total (const SleepingCellHistogram &h)
{
  return std::accumulate (h.scores.begin (), h.scores.end (), 0.0);
}

SleepingCellHistogram
peak_at (std::size_t n, std::size_t cell)
{
  SleepingCellHistogram h;
  h.cells.resize (n);
  std::iota (h.cells.begin (), h.cells.end (), 1);
  h.scores.assign (n, 0.0);
  h.scores[cell] = 100.0;
  h.stage = HistogramStage::Normalized;
  return h;
}

SleepingCellHistogram
flat (std::size_t n)
{
  auto h = peak_at (n, 0);
  std::fill (h.scores.begin (), h.scores.end (), 100.0 / static_cast<double> (n));
  return h;
}

} // namespace

TEST_CASE ("output names")
{
  CHECK (output_name (0) == "subcall");
  CHECK (output_name (kCombined) == "combined");
  for (std::size_t i = 0; i < kOutputCount; ++i)
    {
      CHECK (output_from_name (output_name (i)) == i);
    }
  CHECK_FALSE (output_from_name ("all"));
}

TEST_CASE ("the suite has 72 fold pairs")
{
  const auto pairs = suite_fold_pairs (small_suite ());
  REQUIRE (pairs.size () == 72);
  CHECK (pairs[0].test_role == DatasetRole::Problematic);
  CHECK (pairs[35].test_role == DatasetRole::Problematic);
  CHECK (pairs[36].test_role == DatasetRole::Reference);
  CHECK (pairs[71].train_index == 5);
  CHECK (pairs[71].test_index == 5);
}

TEST_CASE ("one fold")
{
  const auto &suite = small_suite ();
  const auto config = small_config ();
  const FoldPair pair{DatasetRole::Problematic, 0, 1};
  const auto r = run_fold (config, suite.layout, pair, fold_input (suite.normal, 0),
                           fold_input (suite.problematic, 1));
  CHECK (r.components == 6);
  CHECK (r.vocabulary_size >= 6);
  CHECK (r.outcome.test_scores.size () == r.test_sub_calls.size ());
  CHECK (r.outcome.test_truth.size () == r.test_sub_calls.size ());
  CHECK (r.test_anomalous.size () == r.test_sub_calls.size ());
  CHECK (r.outcome.scenario () == Scenario::Faulty);

  const auto flags = classify (r.train_scores, r.threshold);
  CHECK (std::count (flags.begin (), flags.end (), true)
         <= 0.05 * static_cast<double> (flags.size ()));

  for (std::size_t o = 0; o < kOutputCount; ++o)
    {
      CHECK (std::abs (total (r.outcome.amplified[o]) - 100.0) < 1e-6);
      CHECK (std::abs (total (r.outcome.unamplified[o]) - 100.0) < 1e-6);
    }
  const std::vector<SleepingCellHistogram> four (r.outcome.amplified.begin (),
                                                 r.outcome.amplified.begin () + 4);
  const auto combined = combine (four);
  for (std::size_t c = 0; c < combined.scores.size (); ++c)
    {
      CHECK (combined.scores[c] == doctest::Approx (r.outcome.amplified[kCombined].scores[c]));
    }
  CHECK (r.outcome.amplified[kCombined].argmax () == 0);
}

TEST_CASE ("fold errors")
{
  const auto &suite = small_suite ();
  auto config = small_config ();
  config.k = 100000;
  CHECK_THROWS_AS (run_fold (config, suite.layout, FoldPair{}, fold_input (suite.normal, 0),
                             fold_input (suite.problematic, 0)),
                   DataError);
  CHECK_THROWS_AS (fold_input (suite.normal, 6), DataError);
}

TEST_CASE ("automatic component count")
{
  const auto &suite = small_suite ();
  auto config = small_config ();
  config.auto_components = true;
  const auto r = run_fold (config, suite.layout, FoldPair{}, fold_input (suite.normal, 0),
                           fold_input (suite.problematic, 0));
  CHECK (r.components >= 1);
  CHECK (r.components <= r.vocabulary_size);
}

TEST_CASE ("threads do not change results")
{
  const auto &suite = small_suite ();
  const auto config = small_config ();
  const auto all = suite_fold_pairs (suite);
  const std::vector<FoldPair> pairs{all[0], all[7], all[40], all[71]};
  const auto a = run_folds (config, suite, pairs, 1);
  const auto b = run_folds (config, suite, pairs, 3);
  REQUIRE (a.size () == b.size ());
  for (std::size_t i = 0; i < a.size (); ++i)
    {
      CHECK (a[i].outcome.test_scores == b[i].outcome.test_scores);
      for (std::size_t o = 0; o < kOutputCount; ++o)
        {
          CHECK (a[i].outcome.amplified[o].scores == b[i].outcome.amplified[o].scores);
        }
    }
}

TEST_CASE ("summary of a perfect synthetic run")
{
  std::vector<FoldOutcome> folds;
  for (std::size_t i = 0; i < 36; ++i)
    {
      for (const auto role : {DatasetRole::Problematic, DatasetRole::Reference})
        {
          FoldOutcome f;
          f.pair = FoldPair{role, i / 6, i % 6};
          const bool faulty = role == DatasetRole::Problematic;
          for (std::size_t o = 0; o < kOutputCount; ++o)
            {
              f.amplified[o] = faulty ? peak_at (21, 0) : flat (21);
              f.unamplified[o] = f.amplified[o];
            }
          f.test_scores = {1.0, 2.0, 9.0};
          f.test_truth = {false, false, faulty};
          folds.push_back (f);
        }
    }
  const auto s = summarize (folds, 1, 21);
  CHECK (s.outputs.size () == 2 * kOutputCount);
  CHECK (s.mean_auc == 1.0);
  CHECK (s.auc_folds == 36);
  for (const auto &o : s.outputs)
    {
      CHECK (o.metrics.f_score == 1.0);
      CHECK (o.metrics.fpr == 0.0);
      CHECK (o.counts.total () == 72 * 21);
      CHECK (o.problematic.abnormal_cells () == std::vector<CellId>{1});
      CHECK (o.reference.abnormal_cells ().empty ());
      CHECK (o.distance_faulty == doctest::Approx (0.0));
      CHECK (o.distance_clean == doctest::Approx (0.0));
      CHECK (o.runs_faulty == 36);
      CHECK (o.runs_clean == 36);
    }
  CHECK (s.find ("target", false).output == "target");
  CHECK_THROWS (s.find ("nothing", true));
}
