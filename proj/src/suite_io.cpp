#include "sleepcell/suite_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sleepcell/error.hpp"

namespace sleepcell {

namespace {

namespace fs = std::filesystem;

constexpr DatasetRole kRoles[] = {DatasetRole::Normal, DatasetRole::Problematic,
                                  DatasetRole::Reference};

std::string
file_digest (const fs::path &path)
{
  std::ifstream in (path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf ();
  char hex[17];
  std::snprintf (hex, sizeof hex, "%016llx",
                 static_cast<unsigned long long> (fnv1a64 (buf.str ())));
  return hex;
}

} // namespace

std::string
chunk_file_name (DatasetRole role, int index)
{
  return std::string (role_name (role)) + "_chunk_" + std::to_string (index) + ".jsonl";
}

void
write_suite (const fs::path &dir, const DatasetSuite &suite, const RunConfig &config)
{
  const fs::path parent = dir.has_parent_path () ? dir.parent_path () : fs::path (".");
  if (!fs::is_directory (parent))
    {
      throw DataError ("output parent directory " + parent.string () + " does not exist");
    }
  std::error_code ec;
  fs::create_directory (dir, ec);
  if (ec || !fs::is_directory (dir))
    {
      throw DataError ("cannot create " + dir.string ());
    }

  save_config (dir / "config.json", config);

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = config_hash (config);
  manifest["faulty_cell"] = config.suite.faulty_cell;
  manifest["chunks"] = config.suite.chunks;
  nlohmann::ordered_json files = nlohmann::ordered_json::array ();

  auto record_file = [&] (const std::string &name, std::size_t rows) {
    nlohmann::ordered_json f;
    f["name"] = name;
    f["rows"] = rows;
    f["fnv1a64"] = file_digest (dir / name);
    files.push_back (f);
  };

  for (const auto role : kRoles)
    {
      const Dataset &d = suite.get (role);
      for (const auto &chunk : d.chunks)
        {
          const auto name = chunk_file_name (role, chunk.index);
          const auto records = flatten (chunk.calls);
          write_log (dir / name, records);
          record_file (name, records.size ());
        }
      const std::string dom = std::string (role_name (role)) + "_dominance.csv";
      write_dominance_csv (dir / dom, d.dominance);
      record_file (dom, d.dominance.cells.size ());
      const std::string truth = std::string (role_name (role)) + "_truth.jsonl";
      write_ground_truth (dir / truth, d.truth);
      record_file (truth, d.truth.size ());
    }
  manifest["files"] = files;

  std::ofstream out (dir / "manifest.json", std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + (dir / "manifest.json").string ());
    }
  out << manifest.dump (2) << '\n';
}

LoadedSuite
load_suite (const fs::path &dir)
{
  if (!fs::is_directory (dir))
    {
      throw DataError ("data directory " + dir.string () + " does not exist");
    }
  if (!fs::exists (dir / "config.json"))
    {
      throw DataError ("missing " + (dir / "config.json").string ());
    }
  LoadedSuite loaded;
  loaded.config = load_config (dir / "config.json");
  const auto &cfg = loaded.config.suite;
  auto &suite = loaded.suite;
  suite.layout = make_hex_layout (cfg.layout);
  const GridSpec grid = grid_for (suite.layout.bounds, cfg.shadowing.resolution_m);

  for (const auto role : kRoles)
    {
      Dataset d;
      d.role = role;
      d.dominance = read_dominance_csv (dir / (std::string (role_name (role)) + "_dominance.csv"),
                                        grid);
      for (const CellId id : d.dominance.cells)
        {
          if (!suite.layout.contains (id))
            {
              throw DataError ("dominance map of " + std::string (role_name (role))
                               + " names unknown cell " + std::to_string (id));
            }
        }
      d.truth = read_ground_truth (dir / (std::string (role_name (role)) + "_truth.jsonl"));
      d.labels = FaultLabels (d.truth);
      for (int i = 0; i < cfg.chunks; ++i)
        {
          Chunk c;
          c.role = role;
          c.index = i;
          c.calls = parse_log (dir / chunk_file_name (role, i));
          for (const auto &call : c.calls)
            {
              for (const auto &r : call.records)
                {
                  if (!suite.layout.contains (r.serving)
                      || (r.target && !suite.layout.contains (*r.target)))
                    {
                      throw DataError (chunk_file_name (role, i) + ": record of UE "
                                       + std::to_string (r.ue) + " names an unknown cell");
                    }
                }
            }
          d.chunks.push_back (std::move (c));
        }
      switch (role)
        {
        case DatasetRole::Normal:
          suite.normal = std::move (d);
          break;
        case DatasetRole::Problematic:
          suite.problematic = std::move (d);
          break;
        case DatasetRole::Reference:
          suite.reference = std::move (d);
          break;
        }
    }
  return loaded;
}

} // namespace sleepcell
