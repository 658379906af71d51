#include "sleepcell/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sleepcell/error.hpp"
#include "sleepcell/suite_io.hpp"

namespace sleepcell {

namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

namespace {

void
ensure_dir (const fs::path &dir)
{
  std::error_code ec;
  fs::create_directories (dir, ec);
  if (ec || !fs::is_directory (dir))
    {
      throw DataError ("cannot create " + dir.string ());
    }
}

void
write_json (const fs::path &path, const OJson &j)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out << j.dump (2) << '\n';
}

nlohmann::json
read_json (const fs::path &path)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw DataError ("missing " + path.string ());
    }
  auto j = nlohmann::json::parse (in, nullptr, false);
  if (j.is_discarded ())
    {
      throw DataError (path.string () + " is not valid JSON");
    }
  return j;
}

using CsvRows = std::vector<std::vector<std::string>>;

/// Rows after the header; the header must start with `expected`.
CsvRows
read_csv (const fs::path &path, std::string_view expected)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw DataError ("missing " + path.string ());
    }
  std::string line;
  if (!std::getline (in, line) || line.rfind (expected, 0) != 0)
    {
      throw DataError (path.string () + ": unexpected header");
    }
  CsvRows rows;
  while (std::getline (in, line))
    {
      if (line.empty ())
        {
          continue;
        }
      std::vector<std::string> cells;
      std::stringstream ss (line);
      std::string cell;
      while (std::getline (ss, cell, ','))
        {
          cells.push_back (cell);
        }
      if (!line.empty () && line.back () == ',')
        {
          cells.emplace_back ();
        }
      rows.push_back (std::move (cells));
    }
  return rows;
}

double
to_double (const std::string &s, const fs::path &path)
{
  try
    {
      std::size_t used = 0;
      const double v = std::stod (s, &used);
      if (used != s.size ())
        {
          throw std::invalid_argument (s);
        }
      return v;
    }
  catch (const std::exception &)
    {
      throw DataError (path.string () + ": bad number '" + s + "'");
    }
}

/// Normalized histograms (amplified, unamplified) from a fold CSV.
std::pair<SleepingCellHistogram, SleepingCellHistogram>
read_normalized (const fs::path &path, bool combined)
{
  const auto rows = read_csv (path, combined ? "cell_id,normalized,normalized_unamplified"
                                             : "cell_id,raw,amplified,normalized");
  SleepingCellHistogram amp, plain;
  amp.stage = plain.stage = HistogramStage::Normalized;
  const std::size_t col = combined ? 1 : 3;
  for (const auto &r : rows)
    {
      if (r.size () < col + 2)
        {
          throw DataError (path.string () + ": short row");
        }
      const auto id = static_cast<CellId> (to_double (r[0], path));
      amp.cells.push_back (id);
      plain.cells.push_back (id);
      amp.scores.push_back (to_double (r[col], path));
      plain.scores.push_back (to_double (r[col + 1], path));
    }
  return {amp, plain};
}

void
write_combined_csv (const fs::path &path, const SleepingCellHistogram &amplified,
                    const SleepingCellHistogram &unamplified, const CellLabels *labels)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out.precision (17);
  out << "cell_id,normalized,normalized_unamplified,label\n";
  for (std::size_t c = 0; c < amplified.cells.size (); ++c)
    {
      out << amplified.cells[c] << ',' << amplified.scores[c] << ','
          << unamplified.scores[c] << ',';
      if (labels)
        {
          out << (labels->abnormal.at (c) ? "abnormal" : "normal");
        }
      out << '\n';
    }
}

OJson
cells_json (const std::vector<CellId> &cells)
{
  OJson a = OJson::array ();
  for (const auto c : cells)
    {
      a.push_back (c);
    }
  return a;
}

std::string
fixed (double v, int digits = 3)
{
  std::ostringstream s;
  s << std::fixed << std::setprecision (digits) << v;
  return s.str ();
}

} // namespace

std::vector<std::size_t>
outputs_for_method (const std::string &method)
{
  if (method == "all")
    {
      std::vector<std::size_t> all (kOutputCount);
      for (std::size_t i = 0; i < kOutputCount; ++i)
        {
          all[i] = i;
        }
      return all;
    }
  const auto o = output_from_name (method);
  if (!o)
    {
      throw ConfigError ("unknown method '" + method + "'");
    }
  return {*o};
}

std::string
fold_name (const FoldPair &pair)
{
  return std::string (role_name (pair.test_role)) + "_" + std::to_string (pair.train_index)
         + "_" + std::to_string (pair.test_index);
}

void
cmd_simulate (const RunConfig &config, const fs::path &out_dir, std::ostream &log)
{
  config.validate ();
  const auto suite = generate_dataset_suite (config.suite);
  write_suite (out_dir, suite, config);
  log << "simulated " << suite.normal.log.size () << " normal, "
      << suite.problematic.log.size () << " problematic, " << suite.reference.log.size ()
      << " reference events into " << out_dir.string () << '\n';
}

void
cmd_detect (const DetectOptions &options, std::ostream &log)
{
  auto loaded = load_suite (options.data_dir);
  RunConfig config = loaded.config;
  if (options.config)
    {
      const auto suite_section = config.suite;
      config = *options.config;
      config.suite = suite_section;
    }
  if (options.amplify)
    {
      config.amplify = *options.amplify;
    }
  config.validate ();
  const auto &suite = loaded.suite;

  std::vector<FoldPair> pairs;
  for (const auto &p : suite_fold_pairs (suite))
    {
      if (options.role == "all" || options.role == role_name (p.test_role))
        {
          pairs.push_back (p);
        }
    }
  if (options.role != "all" && options.role != "problematic" && options.role != "reference")
    {
      throw ConfigError ("--role must be all, problematic or reference");
    }
  if (options.folds)
    {
      if (*options.folds == 0)
        {
          throw ConfigError ("--folds must be >= 1");
        }
      pairs.resize (std::min (pairs.size (), *options.folds));
    }

  const auto results = run_folds (config, suite, pairs, options.jobs);
  const auto outcomes = outcomes_of (results);
  const auto summary = summarize (outcomes, config.suite.faulty_cell, suite.layout.size ());

  ensure_dir (options.out_dir);
  save_config (options.out_dir / "config.json", config);

  const auto outputs = options.outputs.empty () ? outputs_for_method ("all") : options.outputs;
  const bool amp = config.amplify;

  OJson run;
  run["config_hash"] = config_hash (config);
  run["amplify"] = amp;
  run["faulty_cell"] = config.suite.faulty_cell;
  run["cells"] = suite.layout.size ();
  OJson names = OJson::array ();
  for (const auto &p : pairs)
    {
      names.push_back (fold_name (p));
    }
  run["folds"] = names;
  OJson outs = OJson::array ();
  for (const auto o : outputs)
    {
      outs.push_back (output_name (o));
    }
  run["outputs"] = outs;

  const fs::path folds_dir = options.out_dir / "folds";
  for (std::size_t i = 0; i < results.size (); ++i)
    {
      const auto &r = results[i];
      const auto &o = r.outcome;
      const fs::path dir = folds_dir / fold_name (o.pair);
      ensure_dir (dir);

      OJson meta;
      meta["test_role"] = role_name (o.pair.test_role);
      meta["train_chunk"] = o.pair.train_index;
      meta["test_chunk"] = o.pair.test_index;
      meta["train_rows"] = r.train_scores.size ();
      meta["test_rows"] = o.test_scores.size ();
      meta["anomalous_test_rows"]
        = std::count (r.test_anomalous.begin (), r.test_anomalous.end (), true);
      meta["vocabulary_size"] = r.vocabulary_size;
      meta["components"] = r.components;
      meta["threshold"] = r.threshold.value;
      meta["percentile"] = r.threshold.percentile;
      write_json (dir / "fold.json", meta);

      write_scores_csv (dir / "scores.csv", o.test_scores, r.test_anomalous);
      write_scores_csv (dir / "train_scores.csv", r.train_scores,
                        classify (r.train_scores, r.threshold));
      {
        std::ofstream sc (dir / "subcalls.csv", std::ios::binary);
        if (!sc)
          {
            throw DataError ("cannot write " + (dir / "subcalls.csv").string ());
          }
        sc << "row,ue,call_index,offset,length,fault_affected\n";
        for (std::size_t s = 0; s < r.test_sub_calls.size (); ++s)
          {
            const auto &sub = r.test_sub_calls[s];
            sc << s << ',' << sub.ue << ',' << sub.call_index << ',' << sub.offset << ','
               << sub.records.size () << ',' << (o.test_truth[s] ? 1 : 0) << '\n';
          }
      }

      for (std::size_t m = 0; m < r.methods.size (); ++m)
        {
          const auto &stats = summary.find (output_name (m), amp).stats;
          const auto &h = amp ? o.amplified[m] : o.unamplified[m];
          const auto labels = label_cells (std::span<const SleepingCellHistogram> (&h, 1), stats);
          write_histogram_csv (dir / (std::string (output_name (m)) + ".csv"), r.methods[m],
                               &labels);
        }
      {
        const auto &stats = summary.find (output_name (kCombined), amp).stats;
        const auto &h = amp ? o.amplified[kCombined] : o.unamplified[kCombined];
        const auto labels = label_cells (std::span<const SleepingCellHistogram> (&h, 1), stats);
        write_combined_csv (dir / "combined.csv", o.amplified[kCombined],
                            o.unamplified[kCombined], &labels);
      }
      const std::size_t shown = outputs.front ();
      write_heatmap_svg (dir / "heatmap.svg", suite.layout,
                         amp ? o.amplified[shown] : o.unamplified[shown],
                         fold_name (o.pair) + " " + std::string (output_name (shown)));
    }

  const fs::path agg = options.out_dir / "aggregate";
  ensure_dir (agg);
  std::ofstream labels_csv (agg / "labels.csv", std::ios::binary);
  if (!labels_csv)
    {
      throw DataError ("cannot write " + (agg / "labels.csv").string ());
    }
  labels_csv.precision (17);
  labels_csv << "output,amplified,cell_id,problematic_mean,reference_mean,threshold,"
                "problematic_label,reference_label\n";
  OJson abnormal;
  for (const auto o : outputs)
    {
      const auto &s = summary.find (output_name (o), amp);
      for (std::size_t c = 0; c < suite.layout.size (); ++c)
        {
          const bool has_p = !s.problematic.cells.empty ();
          const bool has_r = !s.reference.cells.empty ();
          labels_csv << s.output << ',' << (amp ? 1 : 0) << ',' << suite.layout.cells[c].id << ','
                     << (has_p ? fixed (s.problematic.mean_scores[c], 12) : "") << ','
                     << (has_r ? fixed (s.reference.mean_scores[c], 12) : "") << ','
                     << s.stats.threshold () << ','
                     << (has_p ? (s.problematic.abnormal[c] ? "abnormal" : "normal") : "") << ','
                     << (has_r ? (s.reference.abnormal[c] ? "abnormal" : "normal") : "") << '\n';
        }
      OJson entry;
      entry["problematic"] = cells_json (s.problematic.abnormal_cells ());
      entry["reference"] = cells_json (s.reference.abnormal_cells ());
      abnormal[s.output] = entry;

      for (const auto &[role, labels] :
           {std::pair<std::string, const CellLabels *>{"problematic", &s.problematic},
            {"reference", &s.reference}})
        {
          if (labels->cells.empty ())
            {
              continue;
            }
          SleepingCellHistogram mean;
          mean.cells = labels->cells;
          mean.scores = labels->mean_scores;
          mean.stage = HistogramStage::Normalized;
          write_heatmap_svg (agg / ("heatmap_" + s.output + "_" + role + ".svg"), suite.layout,
                             mean, s.output + " mean over " + role + " folds");
        }
    }
  run["abnormal_cells"] = abnormal;
  write_json (options.out_dir / "run.json", run);

  log << "ran " << results.size () << " folds into " << options.out_dir.string () << '\n';
  for (const auto o : outputs)
    {
      const auto &s = summary.find (output_name (o), amp);
      log << "  " << std::left << std::setw (9) << s.output << " abnormal (problematic): ";
      for (const auto c : s.problematic.abnormal_cells ())
        {
          log << c << ' ';
        }
      log << " abnormal (reference): ";
      for (const auto c : s.reference.abnormal_cells ())
        {
          log << c << ' ';
        }
      log << '\n';
    }
}

FoldOutcome
read_fold_outcome (const fs::path &dir)
{
  FoldOutcome o;
  const auto meta = read_json (dir / "fold.json");
  try
    {
      const auto role = role_from_name (meta.at ("test_role").get<std::string> ());
      if (role == DatasetRole::Normal)
        {
          throw DataError (dir.string () + ": normal data cannot be a test role");
        }
      o.pair = FoldPair{role, meta.at ("train_chunk").get<std::size_t> (),
                        meta.at ("test_chunk").get<std::size_t> ()};
    }
  catch (const nlohmann::json::exception &)
    {
      throw DataError ((dir / "fold.json").string () + ": missing or bad fields");
    }
  for (std::size_t m = 0; m < 4; ++m)
    {
      auto [amp, plain] = read_normalized (dir / (std::string (output_name (m)) + ".csv"), false);
      o.amplified[m] = std::move (amp);
      o.unamplified[m] = std::move (plain);
    }
  auto [amp, plain] = read_normalized (dir / "combined.csv", true);
  o.amplified[kCombined] = std::move (amp);
  o.unamplified[kCombined] = std::move (plain);

  const auto scores = read_csv (dir / "scores.csv", "row,score,is_anomalous");
  const auto subs = read_csv (dir / "subcalls.csv", "row,ue,call_index,offset,length,fault_affected");
  if (scores.size () != subs.size ())
    {
      throw DataError (dir.string () + ": scores.csv and subcalls.csv differ in length");
    }
  for (std::size_t i = 0; i < scores.size (); ++i)
    {
      if (scores[i].size () < 2 || subs[i].size () < 6)
        {
          throw DataError (dir.string () + ": short row in fold outputs");
        }
      o.test_scores.push_back (to_double (scores[i][1], dir / "scores.csv"));
      o.test_truth.push_back (subs[i][5] == "1");
    }
  return o;
}

void
cmd_evaluate (const EvaluateOptions &options, std::ostream &log)
{
  const fs::path run_path = options.out_dir / "run.json";
  if (!fs::exists (run_path))
    {
      throw DataError ("no detection outputs in " + options.out_dir.string ()
                       + " (missing run.json)");
    }
  const auto run = read_json (run_path);
  std::vector<FoldOutcome> folds;
  CellId faulty = 0;
  std::size_t cells = 0;
  try
    {
      faulty = run.at ("faulty_cell").get<CellId> ();
      cells = run.at ("cells").get<std::size_t> ();
      for (const auto &name : run.at ("folds"))
        {
          folds.push_back (read_fold_outcome (options.out_dir / "folds" / name.get<std::string> ()));
        }
    }
  catch (const nlohmann::json::exception &)
    {
      throw DataError (run_path.string () + ": missing or bad fields");
    }
  if (folds.empty ())
    {
      throw DataError (run_path.string () + " lists no folds");
    }
  const auto summary = summarize (folds, faulty, cells);
  const auto outputs = options.outputs.empty () ? outputs_for_method ("all") : options.outputs;

  const fs::path dir = options.out_dir / "evaluation";
  ensure_dir (dir);

  std::size_t n_faulty = 0;
  for (const auto &f : folds)
    {
      n_faulty += f.scenario () == Scenario::Faulty;
    }

  OJson metrics;
  metrics["config_hash"] = run.value ("config_hash", "");
  metrics["faulty_cell"] = faulty;
  metrics["cells"] = cells;
  metrics["folds"] = {{"problematic", n_faulty}, {"reference", folds.size () - n_faulty}};
  if (summary.auc_folds > 0)
    {
      metrics["roc"] = {{"mean_auc", summary.mean_auc},
                        {"folds", summary.auc_folds},
                        {"pooled_auc", summary.pooled_roc.auc}};
      write_roc_csv (dir / "roc.csv", summary.pooled_roc);
    }
  else
    {
      metrics["roc"] = nullptr;
    }

  std::ofstream radar (dir / "radar.csv", std::ios::binary);
  std::ofstream heur (dir / "heuristic.csv", std::ios::binary);
  if (!radar || !heur)
    {
      throw DataError ("cannot write evaluation files in " + dir.string ());
    }
  radar.precision (17);
  heur.precision (17);
  radar << "output,amplified,accuracy,precision,recall,f_score,tnr,fpr\n";
  heur << "output,amplified,fold,scenario,x,y,distance\n";

  OJson rows = OJson::array ();
  for (const auto o : outputs)
    {
      for (const bool amp : {true, false})
        {
          if (amp && options.unamplified_only)
            {
              continue;
            }
          const auto &s = summary.find (output_name (o), amp);
          OJson e;
          e["output"] = s.output;
          e["amplified"] = amp;
          e["mu"] = s.stats.mean;
          e["sigma"] = s.stats.sigma;
          e["threshold"] = s.stats.threshold ();
          e["counts"] = {{"tp", s.counts.tp}, {"fp", s.counts.fp},
                         {"tn", s.counts.tn}, {"fn", s.counts.fn}};
          e["metrics"] = {{"accuracy", s.metrics.accuracy},   {"precision", s.metrics.precision},
                          {"recall", s.metrics.recall},       {"f_score", s.metrics.f_score},
                          {"tnr", s.metrics.tnr},             {"fpr", s.metrics.fpr}};
          e["heuristic_distance"] = {{"faulty", s.distance_faulty},
                                     {"clean", s.distance_clean},
                                     {"total", s.distance_faulty + s.distance_clean}};
          e["abnormal_cells"] = {{"problematic", cells_json (s.problematic.abnormal_cells ())},
                                 {"reference", cells_json (s.reference.abnormal_cells ())}};
          rows.push_back (e);

          radar << s.output << ',' << (amp ? 1 : 0) << ',' << s.metrics.accuracy << ','
                << s.metrics.precision << ',' << s.metrics.recall << ',' << s.metrics.f_score
                << ',' << s.metrics.tnr << ',' << s.metrics.fpr << '\n';
          for (const auto &f : folds)
            {
              const auto &h = amp ? f.amplified[o] : f.unamplified[o];
              const auto p = heuristic_point (h);
              heur << s.output << ',' << (amp ? 1 : 0) << ',' << fold_name (f.pair) << ','
                   << scenario_name (f.scenario ()) << ',' << p.x << ',' << p.y << ','
                   << heuristic_distance (h, f.scenario (), cells) << '\n';
            }
        }
    }
  metrics["outputs"] = rows;
  write_json (dir / "metrics.json", metrics);
  log << "evaluated " << folds.size () << " folds into " << dir.string () << '\n';
}

void
cmd_report (const fs::path &out_dir, std::ostream &out)
{
  const auto metrics = read_json (out_dir / "evaluation" / "metrics.json");
  std::ostringstream md;
  try
    {
      md << "# Sleeping cell detection report\n\n";
      md << "Faulty cell: " << metrics.at ("faulty_cell").get<int> () << ", cells: "
         << metrics.at ("cells").get<int> () << ", folds: "
         << metrics.at ("folds").at ("problematic").get<int> () << " problematic + "
         << metrics.at ("folds").at ("reference").get<int> () << " reference\n\n";
      if (!metrics.at ("roc").is_null ())
        {
          md << "Sub-call ROC AUC: mean " << fixed (metrics["roc"].at ("mean_auc").get<double> (), 4)
             << " over " << metrics["roc"].at ("folds").get<int> () << " folds, pooled "
             << fixed (metrics["roc"].at ("pooled_auc").get<double> (), 4) << "\n\n";
        }
      md << "| method | amplified | accuracy | precision | recall | F | TNR | FPR "
            "| distance faulty | distance clean | abnormal (problematic) | abnormal (reference) |\n";
      md << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
      for (const auto &e : metrics.at ("outputs"))
        {
          const auto &m = e.at ("metrics");
          auto list = [] (const nlohmann::json &a) {
            std::string s;
            for (const auto &v : a)
              {
                s += (s.empty () ? "" : " ") + std::to_string (v.get<int> ());
              }
            return s.empty () ? std::string ("-") : s;
          };
          md << "| " << e.at ("output").get<std::string> () << " | "
             << (e.at ("amplified").get<bool> () ? "yes" : "no") << " | "
             << fixed (m.at ("accuracy").get<double> ()) << " | "
             << fixed (m.at ("precision").get<double> ()) << " | "
             << fixed (m.at ("recall").get<double> ()) << " | "
             << fixed (m.at ("f_score").get<double> ()) << " | "
             << fixed (m.at ("tnr").get<double> ()) << " | "
             << fixed (m.at ("fpr").get<double> ()) << " | "
             << fixed (e.at ("heuristic_distance").at ("faulty").get<double> (), 1) << " | "
             << fixed (e.at ("heuristic_distance").at ("clean").get<double> (), 1) << " | "
             << list (e.at ("abnormal_cells").at ("problematic")) << " | "
             << list (e.at ("abnormal_cells").at ("reference")) << " |\n";
        }
    }
  catch (const nlohmann::json::exception &)
    {
      throw DataError ((out_dir / "evaluation" / "metrics.json").string ()
                       + ": missing or bad fields");
    }
  std::ofstream file (out_dir / "report.md", std::ios::binary);
  if (!file)
    {
      throw DataError ("cannot write " + (out_dir / "report.md").string ());
    }
  file << md.str ();
  out << md.str ();
}

int
run_cli (int argc, char **argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Sleeping cell detection from MDT event logs"};
  app.require_subcommand (1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  app.add_option ("--config", config_path, "JSON run configuration");
  app.add_option ("--seed", seed, "Derive every simulation seed from this value");

  std::string out_dir;
  std::string data_dir;
  std::optional<std::size_t> folds;
  std::string role = "all";
  unsigned jobs = 1;
  std::string method = "all";
  bool no_amplify = false;

  auto *sim = app.add_subcommand ("simulate", "Generate normal, problematic and reference datasets");
  sim->add_option ("--out", out_dir, "Output directory")->required ();

  auto *det = app.add_subcommand ("detect", "Run the fold pairs and write per-cell scores");
  det->add_option ("--data", data_dir, "Directory written by simulate")->required ();
  det->add_option ("--out", out_dir, "Output directory")->required ();
  det->add_option ("--folds", folds, "Run only the first N folds");
  det->add_option ("--role", role, "Test role: all, problematic or reference")
    ->check (CLI::IsMember ({"all", "problematic", "reference"}));
  det->add_option ("--jobs", jobs, "Worker threads")->check (CLI::Range (1u, 256u));
  det->add_option ("--method", method, "Method for heat maps and aggregate labels")
    ->check (CLI::IsMember ({"subcall", "2gram", "symmetry", "target", "combined", "all"}));
  det->add_flag ("--no-amplify", no_amplify, "Label and plot non-amplified scores");

  auto *eva = app.add_subcommand ("evaluate", "Compute metrics from detection outputs");
  eva->add_option ("--out", out_dir, "Directory written by detect")->required ();
  eva->add_option ("--method", method, "Restrict the report to one method")
    ->check (CLI::IsMember ({"subcall", "2gram", "symmetry", "target", "combined", "all"}));
  eva->add_flag ("--no-amplify", no_amplify, "Report only non-amplified scores");

  auto *rep = app.add_subcommand ("report", "Print the evaluation summary");
  rep->add_option ("--out", out_dir, "Directory written by detect and evaluate")->required ();

  auto *cfg = app.add_subcommand ("config", "Print the effective configuration");

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::CallForHelp &e)
    {
      out << app.help ();
      return kExitOk;
    }
  catch (const CLI::ParseError &e)
    {
      err << "error: " << e.what () << '\n';
      return kExitConfig;
    }

  try
    {
      RunConfig config;
      if (!config_path.empty ())
        {
          config = load_config (config_path);
        }
      if (seed)
        {
          config.suite.seeds = SeedSet::derive (*seed);
        }

      if (*sim)
        {
          cmd_simulate (config, out_dir, out);
        }
      else if (*det)
        {
          DetectOptions o;
          o.data_dir = data_dir;
          o.out_dir = out_dir;
          if (!config_path.empty ())
            {
              o.config = config;
            }
          o.folds = folds;
          o.role = role;
          o.jobs = jobs;
          o.outputs = outputs_for_method (method);
          if (no_amplify)
            {
              o.amplify = false;
            }
          cmd_detect (o, out);
        }
      else if (*eva)
        {
          EvaluateOptions o;
          o.out_dir = out_dir;
          o.outputs = outputs_for_method (method);
          o.unamplified_only = no_amplify;
          cmd_evaluate (o, out);
        }
      else if (*rep)
        {
          cmd_report (out_dir, out);
        }
      else if (*cfg)
        {
          out << to_json (config).dump (2) << '\n';
        }
    }
  catch (const ConfigError &e)
    {
      err << "configuration error: " << e.what () << '\n';
      return kExitConfig;
    }
  catch (const DataError &e)
    {
      err << "data error: " << e.what () << '\n';
      return kExitData;
    }
  return kExitOk;
}

} // namespace sleepcell
