#include "sleepcell/localize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "sleepcell/error.hpp"

namespace sleepcell {

namespace {

constexpr std::size_t kPairTypes = kEventCount * kEventCount;

std::size_t
pair_code (EventId a, EventId b)
{
  return static_cast<std::size_t> (event_code (a)) * kEventCount
         + static_cast<std::size_t> (event_code (b));
}

SleepingCellHistogram
empty_for (const NetworkLayout &layout)
{
  const auto ids = layout.cell_ids ();
  return SleepingCellHistogram::zeros (ids);
}

void
check_same_cells (const SleepingCellHistogram &a, const SleepingCellHistogram &b)
{
  if (a.cells != b.cells || a.scores.size () != b.scores.size ())
    {
      throw DataError ("histograms cover different cell sets");
    }
}

double
per_ue (double count, std::size_t ues)
{
  return ues == 0 ? 0.0 : count / static_cast<double> (ues);
}

/// Per-cell share of sub-calls that touch the cell's dominance area.
std::vector<double>
subcall_frequency (const NetworkLayout &layout, const FoldSide &side)
{
  std::vector<double> f (layout.size (), 0.0);
  std::vector<char> touched (layout.size ());
  for (std::size_t i = 0; i < side.sub_calls.size (); ++i)
    {
      if (!side.anomalous[i])
        {
          continue;
        }
      std::fill (touched.begin (), touched.end (), 0);
      for (const auto &r : side.sub_calls[i].records)
        {
          touched[layout.index_of (dominant_cell (*side.dominance, r))] = 1;
        }
      for (std::size_t c = 0; c < touched.size (); ++c)
        {
          f[c] += touched[c];
        }
    }
  for (auto &v : f)
    {
      v = per_ue (v, side.ue_count);
    }
  return f;
}

/// [cell * 81 + pair] attributed 2-gram counts per UE.
std::vector<double>
pair_frequency (const NetworkLayout &layout, const FoldSide &side, bool anomalous_only)
{
  std::vector<double> f (layout.size () * kPairTypes, 0.0);
  for (std::size_t i = 0; i < side.sub_calls.size (); ++i)
    {
      if (anomalous_only && !side.anomalous[i])
        {
          continue;
        }
      const auto &recs = side.sub_calls[i].records;
      for (std::size_t j = 0; j + 1 < recs.size (); ++j)
        {
          const std::size_t g = pair_code (recs[j].event, recs[j + 1].event);
          const std::size_t a = layout.index_of (dominant_cell (*side.dominance, recs[j]));
          const std::size_t b = layout.index_of (dominant_cell (*side.dominance, recs[j + 1]));
          f[a * kPairTypes + g] += 0.5;
          f[b * kPairTypes + g] += 0.5;
        }
    }
  for (auto &v : f)
    {
      v = per_ue (v, side.ue_count);
    }
  return f;
}

/// Border-crossing 2-gram counts [type][from * n + to]; one type when pooled.
std::vector<std::vector<double>>
crossing_counts (const NetworkLayout &layout, const FoldSide &side, SymmetryMode mode)
{
  const std::size_t n = layout.size ();
  const std::size_t types = mode == SymmetryMode::Pooled ? 1 : kPairTypes;
  std::vector<std::vector<double>> counts (types, std::vector<double> (n * n, 0.0));
  for (const auto &call : side.calls)
    {
      const auto &recs = call.records;
      for (std::size_t j = 0; j + 1 < recs.size (); ++j)
        {
          const std::size_t a = layout.index_of (dominant_cell (*side.dominance, recs[j]));
          const std::size_t b = layout.index_of (dominant_cell (*side.dominance, recs[j + 1]));
          if (a == b)
            {
              continue;
            }
          const std::size_t g
            = types == 1 ? 0 : pair_code (recs[j].event, recs[j + 1].event);
          counts[g][a * n + b] += 1.0;
        }
    }
  return counts;
}

double
imbalance (const std::vector<double> &counts, std::size_t n, std::size_t a, std::size_t b)
{
  const double ab = counts[a * n + b];
  const double ba = counts[b * n + a];
  const double total = ab + ba;
  return total > 0.0 ? (ab - ba) / total : 0.0;
}

} // namespace

std::string_view
method_name (Method m)
{
  switch (m)
    {
    case Method::Subcall:
      return "subcall";
    case Method::TwoGram:
      return "2gram";
    case Method::Symmetry:
      return "symmetry";
    case Method::Target:
      return "target";
    }
  return "unknown";
}

std::optional<Method>
method_from_name (std::string_view name)
{
  for (const auto m : kAllMethods)
    {
      if (method_name (m) == name)
        {
          return m;
        }
    }
  return std::nullopt;
}

std::string_view
scope_name (TwoGramScope s)
{
  switch (s)
    {
    case TwoGramScope::Anomalous:
      return "anomalous";
    case TwoGramScope::AnomalousVsAllTrain:
      return "anomalous_vs_all_train";
    case TwoGramScope::All:
      return "all";
    }
  return "unknown";
}

std::optional<TwoGramScope>
scope_from_name (std::string_view name)
{
  for (const auto s : {TwoGramScope::Anomalous, TwoGramScope::AnomalousVsAllTrain,
                       TwoGramScope::All})
    {
      if (scope_name (s) == name)
        {
          return s;
        }
    }
  return std::nullopt;
}

std::string_view
symmetry_name (SymmetryMode s)
{
  return s == SymmetryMode::Pooled ? "pooled" : "per_2gram";
}

std::optional<SymmetryMode>
symmetry_from_name (std::string_view name)
{
  if (name == "pooled")
    {
      return SymmetryMode::Pooled;
    }
  if (name == "per_2gram")
    {
      return SymmetryMode::PerTwoGram;
    }
  return std::nullopt;
}

SleepingCellHistogram
SleepingCellHistogram::zeros (std::span<const CellId> cells)
{
  SleepingCellHistogram h;
  h.cells.assign (cells.begin (), cells.end ());
  h.scores.assign (cells.size (), 0.0);
  return h;
}

double
SleepingCellHistogram::sum () const
{
  return std::accumulate (scores.begin (), scores.end (), 0.0);
}

std::size_t
SleepingCellHistogram::argmax () const
{
  if (scores.empty ())
    {
      throw DataError ("empty histogram has no maximum");
    }
  return static_cast<std::size_t> (std::max_element (scores.begin (), scores.end ())
                                   - scores.begin ());
}

double
SleepingCellHistogram::score_of (CellId cell) const
{
  for (std::size_t i = 0; i < cells.size (); ++i)
    {
      if (cells[i] == cell)
        {
          return scores[i];
        }
    }
  throw DataError ("cell " + std::to_string (cell) + " is not in the histogram");
}

void
FoldSide::validate () const
{
  if (anomalous.size () != sub_calls.size ())
    {
      throw DataError ("anomaly flags do not match the sub-calls");
    }
}

CellId
dominant_cell (const DominanceMap &dominance, const MdtRecord &record)
{
  return dominance.at (record.location);
}

SleepingCellHistogram
sc_dominance_subcall_deviation (const NetworkLayout &layout, const FoldSide &train,
                                const FoldSide &test)
{
  train.validate ();
  test.validate ();
  if (!train.dominance || !test.dominance)
    {
      throw DataError ("sub-call deviation needs dominance maps");
    }
  const auto f_train = subcall_frequency (layout, train);
  const auto f_test = subcall_frequency (layout, test);
  auto h = empty_for (layout);
  for (std::size_t c = 0; c < h.scores.size (); ++c)
    {
      h.scores[c] = std::max (0.0, f_test[c] - f_train[c]);
    }
  return h;
}

SleepingCellHistogram
sc_dominance_2gram_deviation (const NetworkLayout &layout, const FoldSide &train,
                              const FoldSide &test, TwoGramScope scope)
{
  train.validate ();
  test.validate ();
  if (!train.dominance || !test.dominance)
    {
      throw DataError ("2-gram deviation needs dominance maps");
    }
  const auto f_train = pair_frequency (layout, train, scope == TwoGramScope::Anomalous);
  const auto f_test = pair_frequency (layout, test, scope != TwoGramScope::All);
  auto h = empty_for (layout);
  for (std::size_t c = 0; c < h.scores.size (); ++c)
    {
      double acc = 0.0;
      for (std::size_t g = 0; g < kPairTypes; ++g)
        {
          acc += std::abs (f_test[c * kPairTypes + g] - f_train[c * kPairTypes + g]);
        }
      h.scores[c] = acc;
    }
  return h;
}

SleepingCellHistogram
sc_2gram_symmetry_deviation (const NetworkLayout &layout, const FoldSide &train,
                             const FoldSide &test, SymmetryMode mode)
{
  if (!train.dominance || !test.dominance)
    {
      throw DataError ("symmetry deviation needs dominance maps");
    }
  const std::size_t n = layout.size ();
  const auto c_train = crossing_counts (layout, train, mode);
  const auto c_test = crossing_counts (layout, test, mode);
  auto h = empty_for (layout);
  for (std::size_t a = 0; a < n; ++a)
    {
      for (const CellId nb : layout.neighbors[a])
        {
          const std::size_t b = layout.index_of (nb);
          for (std::size_t g = 0; g < c_train.size (); ++g)
            {
              h.scores[a] += std::abs (imbalance (c_test[g], n, a, b)
                                       - imbalance (c_train[g], n, a, b));
            }
        }
    }
  return h;
}

SleepingCellHistogram
sc_target_cell_subcalls (const NetworkLayout &layout, const FoldSide &test)
{
  test.validate ();
  auto h = empty_for (layout);
  std::set<CellId> targets;
  for (std::size_t i = 0; i < test.sub_calls.size (); ++i)
    {
      if (!test.anomalous[i])
        {
          continue;
        }
      targets.clear ();
      for (const auto &r : test.sub_calls[i].records)
        {
          if (r.target)
            {
              targets.insert (*r.target);
            }
        }
      for (const CellId t : targets)
        {
          h.scores[layout.index_of (t)] += 1.0;
        }
    }
  for (auto &v : h.scores)
    {
      v = per_ue (v, test.ue_count);
    }
  return h;
}

SleepingCellHistogram
amplify (const SleepingCellHistogram &h, const NetworkLayout &layout, double epsilon)
{
  if (h.cells != layout.cell_ids ())
    {
      throw DataError ("histogram cells do not match the layout");
    }
  const double total = h.sum ();
  SleepingCellHistogram out = h;
  out.stage = HistogramStage::Amplified;
  for (std::size_t c = 0; c < h.scores.size (); ++c)
    {
      double near = h.scores[c];
      for (const CellId nb : layout.neighbors[c])
        {
          near += h.scores[layout.index_of (nb)];
        }
      // Clamp the rounding residue of total - near.
      const double far = std::max (0.0, total - near);
      out.scores[c] = h.scores[c] / (far + epsilon);
    }
  return out;
}

SleepingCellHistogram
normalize (const SleepingCellHistogram &h)
{
  SleepingCellHistogram out = h;
  out.stage = HistogramStage::Normalized;
  if (h.scores.empty ())
    {
      return out;
    }
  for (const double v : h.scores)
    {
      if (v < 0.0 || !std::isfinite (v))
        {
          throw DataError ("cannot normalize negative or non-finite scores");
        }
    }
  const double total = h.sum ();
  if (total <= 0.0)
    {
      std::fill (out.scores.begin (), out.scores.end (),
                 100.0 / static_cast<double> (h.scores.size ()));
      return out;
    }
  for (auto &v : out.scores)
    {
      v = 100.0 * v / total;
    }
  return out;
}

SleepingCellHistogram
combine (std::span<const SleepingCellHistogram> histograms, std::span<const double> weights)
{
  if (histograms.empty ())
    {
      throw DataError ("nothing to combine");
    }
  if (!weights.empty () && weights.size () != histograms.size ())
    {
      throw ConfigError ("weight count does not match the histogram count");
    }
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < histograms.size (); ++i)
    {
      check_same_cells (histograms[0], histograms[i]);
      const double w = weights.empty () ? 1.0 : weights[i];
      if (!(w >= 0.0) || !std::isfinite (w))
        {
          throw ConfigError ("combination weights must be finite and >= 0");
        }
      weight_sum += w;
    }
  if (!(weight_sum > 0.0))
    {
      throw ConfigError ("combination weights sum to zero");
    }
  SleepingCellHistogram out = SleepingCellHistogram::zeros (histograms[0].cells);
  for (std::size_t i = 0; i < histograms.size (); ++i)
    {
      const double w = weights.empty () ? 1.0 : weights[i];
      for (std::size_t c = 0; c < out.scores.size (); ++c)
        {
          out.scores[c] += w * histograms[i].scores[c];
        }
    }
  for (auto &v : out.scores)
    {
      v /= weight_sum;
    }
  return normalize (out);
}

PooledStats
pooled_stats (std::span<const SleepingCellHistogram> runs)
{
  if (runs.empty ())
    {
      throw DataError ("no runs to pool");
    }
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto &h : runs)
    {
      check_same_cells (runs[0], h);
      sum += h.sum ();
      count += h.scores.size ();
    }
  if (count == 0)
    {
      throw DataError ("no scores to pool");
    }
  PooledStats s;
  s.mean = sum / static_cast<double> (count);
  double acc = 0.0;
  for (const auto &h : runs)
    {
      for (const double v : h.scores)
        {
          acc += (v - s.mean) * (v - s.mean);
        }
    }
  s.sigma = std::sqrt (acc / static_cast<double> (count));
  return s;
}

CellLabels
label_cells (std::span<const SleepingCellHistogram> runs)
{
  return label_cells (runs, pooled_stats (runs));
}

CellLabels
label_cells (std::span<const SleepingCellHistogram> runs, const PooledStats &stats)
{
  if (runs.empty ())
    {
      throw DataError ("no runs to label");
    }
  CellLabels labels;
  labels.cells = runs[0].cells;
  labels.stats = stats;
  labels.mean_scores.assign (labels.cells.size (), 0.0);
  for (const auto &h : runs)
    {
      check_same_cells (runs[0], h);
      for (std::size_t c = 0; c < h.scores.size (); ++c)
        {
          labels.mean_scores[c] += h.scores[c];
        }
    }
  labels.abnormal.resize (labels.cells.size ());
  for (std::size_t c = 0; c < labels.cells.size (); ++c)
    {
      labels.mean_scores[c] /= static_cast<double> (runs.size ());
      labels.abnormal[c] = labels.mean_scores[c] > stats.threshold ();
    }
  return labels;
}

std::vector<CellId>
CellLabels::abnormal_cells () const
{
  std::vector<CellId> out;
  for (std::size_t c = 0; c < cells.size (); ++c)
    {
      if (abnormal[c])
        {
          out.push_back (cells[c]);
        }
    }
  return out;
}

HistogramReport
process_histogram (const SleepingCellHistogram &raw, const NetworkLayout &layout)
{
  HistogramReport r;
  r.raw = raw;
  r.amplified = amplify (raw, layout);
  r.normalized = normalize (r.amplified);
  r.normalized_unamplified = normalize (raw);
  return r;
}

void
write_histogram_csv (const std::filesystem::path &path, const HistogramReport &report,
                     const CellLabels *labels)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out.precision (17);
  out << "cell_id,raw,amplified,normalized,normalized_unamplified,label\n";
  for (std::size_t c = 0; c < report.raw.cells.size (); ++c)
    {
      out << report.raw.cells[c] << ',' << report.raw.scores[c] << ','
          << report.amplified.scores[c] << ',' << report.normalized.scores[c] << ','
          << report.normalized_unamplified.scores[c] << ',';
      if (labels)
        {
          out << (labels->abnormal.at (c) ? "abnormal" : "normal");
        }
      out << '\n';
    }
}

void
write_heatmap_svg (const std::filesystem::path &path, const NetworkLayout &layout,
                   const SleepingCellHistogram &normalized, std::string_view title)
{
  if (normalized.cells != layout.cell_ids ())
    {
      throw DataError ("histogram cells do not match the layout");
    }
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  const double scale = 0.5; // px per metre
  const double pad = 20.0;
  const double w = layout.bounds.width () * scale + 2 * pad;
  const double h = layout.bounds.height () * scale + 2 * pad + 20.0;
  auto sx = [&] (double x) { return pad + (x - layout.bounds.min.x) * scale; };
  auto sy = [&] (double y) { return pad + 20.0 + (layout.bounds.max.y - y) * scale; };

  double top = 0.0;
  for (const double v : normalized.scores)
    {
      top = std::max (top, v);
    }

  out.setf (std::ios::fixed);
  out.precision (2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty ())
    {
      out << "<text x=\"" << pad << "\" y=\"16\" font-family=\"sans-serif\" "
          << "font-size=\"12\">" << title << "</text>\n";
    }
  out << "<rect x=\"" << sx (layout.bounds.min.x) << "\" y=\"" << sy (layout.bounds.max.y)
      << "\" width=\"" << layout.bounds.width () * scale << "\" height=\""
      << layout.bounds.height () * scale
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";

  const double offset = layout.inter_site_distance / 4.0;
  const double max_radius = layout.inter_site_distance / 6.0 * scale;
  for (std::size_t c = 0; c < layout.size (); ++c)
    {
      const auto &cell = layout.cells[c];
      Point at = cell.site;
      if (cell.azimuth_deg)
        {
          const double a = *cell.azimuth_deg * std::acos (-1.0) / 180.0;
          at.x += offset * std::cos (a);
          at.y += offset * std::sin (a);
        }
      const double share = top > 0.0 ? normalized.scores[c] / top : 0.0;
      const int grey = static_cast<int> (std::lround (235.0 * (1.0 - share)));
      const double radius = max_radius * (0.25 + 0.75 * std::sqrt (share));
      out << "<line x1=\"" << sx (cell.site.x) << "\" y1=\"" << sy (cell.site.y) << "\" x2=\""
          << sx (at.x) << "\" y2=\"" << sy (at.y) << "\" stroke=\"#bbb\"/>\n";
      out << "<circle cx=\"" << sx (at.x) << "\" cy=\"" << sy (at.y) << "\" r=\"" << radius
          << "\" fill=\"rgb(" << grey << ',' << grey << ',' << grey
          << ")\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
      out << "<text x=\"" << sx (at.x) << "\" y=\"" << sy (at.y) + 3.0
          << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\" fill=\""
          << (share > 0.5 ? "white" : "black") << "\">" << cell.id << "</text>\n";
    }
  out << "</svg>\n";
}

} // namespace sleepcell
