#include "sleepcell/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "sleepcell/error.hpp"

namespace sleepcell {

ConfusionCounts &
ConfusionCounts::operator+= (const ConfusionCounts &o)
{
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionCounts
confusion (const CellLabels &labels, std::span<const CellId> faulty)
{
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.cells.size (); ++i)
    {
      const bool actual
        = std::find (faulty.begin (), faulty.end (), labels.cells[i]) != faulty.end ();
      const bool predicted = labels.abnormal[i];
      if (actual && predicted)
        {
          ++c.tp;
        }
      else if (!actual && predicted)
        {
          ++c.fp;
        }
      else if (!actual && !predicted)
        {
          ++c.tn;
        }
      else
        {
          ++c.fn;
        }
    }
  return c;
}

ConfusionMetrics
confusion_metrics (const ConfusionCounts &c)
{
  auto ratio = [] (std::size_t num, std::size_t den, double empty) {
    return den == 0 ? empty : static_cast<double> (num) / static_cast<double> (den);
  };
  ConfusionMetrics m;
  m.accuracy = ratio (c.tp + c.tn, c.total (), 0.0);
  m.precision = ratio (c.tp, c.tp + c.fp, 1.0);
  m.recall = ratio (c.tp, c.tp + c.fn, 1.0);
  m.f_score = (m.precision + m.recall) > 0.0
                ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                : 0.0;
  m.tnr = ratio (c.tn, c.tn + c.fp, 1.0);
  m.fpr = ratio (c.fp, c.fp + c.tn, 0.0);
  return m;
}

RocCurve
roc (std::span<const double> scores, const std::vector<bool> &positive)
{
  if (scores.size () != positive.size ())
    {
      throw DataError ("score and label counts differ");
    }
  const auto pos = static_cast<std::size_t> (std::count (positive.begin (), positive.end (), true));
  const std::size_t neg = positive.size () - pos;
  if (pos == 0 || neg == 0)
    {
      throw DataError ("ROC is undefined with a single class");
    }
  std::vector<std::size_t> order (scores.size ());
  std::iota (order.begin (), order.end (), 0);
  std::sort (order.begin (), order.end (),
             [&] (std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back (RocPoint{0.0, 0.0, std::numeric_limits<double>::infinity ()});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size ())
    {
      const double value = scores[order[i]];
      while (i < order.size () && scores[order[i]] == value)
        {
          if (positive[order[i]])
            {
              ++tp;
            }
          else
            {
              ++fp;
            }
          ++i;
        }
      curve.points.push_back (RocPoint{static_cast<double> (fp) / static_cast<double> (neg),
                                       static_cast<double> (tp) / static_cast<double> (pos),
                                       value});
    }
  for (std::size_t k = 1; k < curve.points.size (); ++k)
    {
      const auto &a = curve.points[k - 1];
      const auto &b = curve.points[k];
      curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
  return curve;
}

void
write_roc_csv (const std::filesystem::path &path, const RocCurve &curve)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out.precision (17);
  out << "fpr,tpr,threshold\n";
  for (const auto &p : curve.points)
    {
      out << p.fpr << ',' << p.tpr << ',';
      if (std::isinf (p.threshold))
        {
          out << "inf";
        }
      else
        {
          out << p.threshold;
        }
      out << '\n';
    }
}

std::string_view
scenario_name (Scenario s)
{
  return s == Scenario::Faulty ? "faulty" : "clean";
}

HeuristicPoint
heuristic_point (const SleepingCellHistogram &normalized)
{
  const std::size_t top = normalized.argmax ();
  HeuristicPoint p;
  p.y = normalized.scores[top];
  if (normalized.scores.size () < 3)
    {
      return p;
    }
  double mean = 0.0;
  for (std::size_t c = 0; c < normalized.scores.size (); ++c)
    {
      if (c != top)
        {
          mean += normalized.scores[c];
        }
    }
  const double n = static_cast<double> (normalized.scores.size () - 1);
  mean /= n;
  double acc = 0.0;
  for (std::size_t c = 0; c < normalized.scores.size (); ++c)
    {
      if (c != top)
        {
          acc += (normalized.scores[c] - mean) * (normalized.scores[c] - mean);
        }
    }
  p.x = std::sqrt (acc / (n - 1.0));
  return p;
}

double
heuristic_distance (const SleepingCellHistogram &normalized, Scenario scenario,
                    std::size_t n_cells)
{
  if (n_cells == 0)
    {
      throw ConfigError ("cell count must be >= 1");
    }
  const auto p = heuristic_point (normalized);
  const double ideal_y
    = scenario == Scenario::Faulty ? 100.0 : 100.0 / static_cast<double> (n_cells);
  return std::hypot (p.x, p.y - ideal_y);
}

} // namespace sleepcell
