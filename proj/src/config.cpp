#include "sleepcell/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sleepcell/error.hpp"

namespace sleepcell {

namespace {

using Json = nlohmann::json;
using Setter = std::function<void (const Json &)>;

struct BadValue
{
};

/// Applies one setter per known key of `obj`; anything else is an error.
void
read_section (const Json &obj, std::string_view section,
              const std::map<std::string, Setter> &setters)
{
  if (!obj.is_object ())
    {
      throw ConfigError ("config section '" + std::string (section)
                         + "' must be an object");
    }
  for (const auto &[key, value] : obj.items ())
    {
      auto it = setters.find (key);
      if (it == setters.end ())
        {
          throw ConfigError ("unknown config key '" + std::string (section) + "."
                             + key + "'");
        }
      try
        {
          it->second (value);
        }
      catch (const BadValue &)
        {
          throw ConfigError ("bad value for config key '" + std::string (section)
                             + "." + key + "'");
        }
      catch (const Json::exception &)
        {
          throw ConfigError ("bad value for config key '" + std::string (section)
                             + "." + key + "'");
        }
    }
}

template <typename T>
Setter
assign (T &target)
{
  return [&target] (const Json &v) {
    if constexpr (std::is_same_v<T, bool>)
      {
        if (!v.is_boolean ())
          {
            throw BadValue{};
          }
      }
    else if constexpr (std::is_floating_point_v<T>)
      {
        if (!v.is_number ())
          {
            throw BadValue{};
          }
      }
    else if constexpr (std::is_unsigned_v<T>)
      {
        if (!v.is_number_unsigned ())
          {
            throw BadValue{};
          }
      }
    else if constexpr (std::is_integral_v<T>)
      {
        if (!v.is_number_integer ())
          {
            throw BadValue{};
          }
      }
    target = v.get<T> ();
  };
}

} // namespace

void
RunConfig::validate () const
{
  suite.sim.validate ();
  if (suite.chunks < 1)
    {
      throw ConfigError ("chunks must be >= 1");
    }
  if (!(suite.layout.isd_m > 0.0) || !(suite.layout.half_width_m > 0.0)
      || !(suite.layout.half_height_m > 0.0))
    {
      throw ConfigError ("layout dimensions must be > 0");
    }
  if (!(suite.shadowing.resolution_m > 0.0) || !(suite.shadowing.sigma_db >= 0.0)
      || !(suite.shadowing.decorrelation_m >= 0.0))
    {
      throw ConfigError ("shadowing resolution must be > 0, sigma and "
                         "decorrelation >= 0");
    }
  if (suite.layout.first_cell_id != 0 && suite.layout.first_cell_id != 1)
    {
      throw ConfigError ("first_cell_id must be 0 or 1");
    }
  if (window < 2 || step < 1 || step > window)
    {
      throw ConfigError ("window must be >= 2 and step in [1, window]");
    }
  if (ngram != 2)
    {
      throw ConfigError ("the post-processing methods need ngram = 2");
    }
  if (components < 1)
    {
      throw ConfigError ("components must be >= 1");
    }
  if (k < 1)
    {
      throw ConfigError ("k must be >= 1");
    }
  if (!(percentile > 0.0 && percentile <= 100.0))
    {
      throw ConfigError ("percentile must be in (0, 100]");
    }
  double total = 0.0;
  for (const double w : weights)
    {
      if (!(w >= 0.0) || !std::isfinite (w))
        {
          throw ConfigError ("weights must be finite and >= 0");
        }
      total += w;
    }
  if (!(total > 0.0))
    {
      throw ConfigError ("weights must not all be zero");
    }
}

nlohmann::ordered_json
to_json (const RunConfig &c)
{
  nlohmann::ordered_json j;
  const auto &l = c.suite.layout;
  j["layout"] = {{"isd_m", l.isd_m},
                 {"tx_power_dbm", l.tx_power_dbm},
                 {"sectorized", l.sectorized},
                 {"wrap_around", l.wrap_around},
                 {"half_width_m", l.half_width_m},
                 {"half_height_m", l.half_height_m},
                 {"first_cell_id", l.first_cell_id}};
  const auto &sh = c.suite.shadowing;
  j["shadowing"] = {{"sigma_db", sh.sigma_db},
                    {"resolution_m", sh.resolution_m},
                    {"decorrelation_m", sh.decorrelation_m},
                    {"per_site", sh.per_site}};
  const auto &s = c.suite.sim;
  j["simulation"] = {{"ues_per_cell", s.ues_per_cell},
                     {"ue_speed_kmh", s.ue_speed_kmh},
                     {"a3_margin_db", s.a3_margin_db},
                     {"ttt_ms", s.ttt_ms},
                     {"a2_rsrp_threshold_dbm", s.a2_rsrp_threshold_dbm},
                     {"a2_rsrp_hysteresis_db", s.a2_rsrp_hysteresis_db},
                     {"a2_rsrq_threshold_db", s.a2_rsrq_threshold_db},
                     {"a2_rsrq_hysteresis_db", s.a2_rsrq_hysteresis_db},
                     {"duration_steps", s.duration_steps},
                     {"step_seconds", s.step_seconds},
                     {"t304_ms", s.t304_ms},
                     {"t310_ms", s.t310_ms},
                     {"rs_power_offset_db", s.rs_power_offset_db},
                     {"penetration_loss_db", s.penetration_loss_db}};
  j["fault"] = {{"faulty_cell", c.suite.faulty_cell}};
  const auto &seeds = c.suite.seeds;
  j["seeds"] = {{"shadow_primary", seeds.shadow_primary},
                {"shadow_reference", seeds.shadow_reference},
                {"mobility_normal", seeds.mobility_normal},
                {"mobility_problematic", seeds.mobility_problematic},
                {"mobility_reference", seeds.mobility_reference}};
  j["chunks"] = c.suite.chunks;
  j["featurize"] = {{"window", c.window}, {"step", c.step}, {"ngram", c.ngram}};
  j["embed"] = {{"components", c.components}, {"auto_components", c.auto_components}};
  j["detect"] = {{"k", c.k}, {"percentile", c.percentile}};
  j["localize"] = {{"weights", c.weights},
                   {"amplify", c.amplify},
                   {"twogram_scope", scope_name (c.twogram_scope)},
                   {"symmetry_mode", symmetry_name (c.symmetry_mode)}};
  return j;
}

RunConfig
run_config_from_json (const nlohmann::json &j)
{
  RunConfig c;
  auto &l = c.suite.layout;
  auto &sh = c.suite.shadowing;
  auto &s = c.suite.sim;
  auto &seeds = c.suite.seeds;

  std::map<std::string, Setter> top;
  top["layout"] = [&] (const Json &v) {
    read_section (v, "layout",
                  {{"isd_m", assign (l.isd_m)},
                   {"tx_power_dbm", assign (l.tx_power_dbm)},
                   {"sectorized", assign (l.sectorized)},
                   {"wrap_around", assign (l.wrap_around)},
                   {"half_width_m", assign (l.half_width_m)},
                   {"half_height_m", assign (l.half_height_m)},
                   {"first_cell_id", assign (l.first_cell_id)}});
  };
  top["shadowing"] = [&] (const Json &v) {
    read_section (v, "shadowing",
                  {{"sigma_db", assign (sh.sigma_db)},
                   {"resolution_m", assign (sh.resolution_m)},
                   {"decorrelation_m", assign (sh.decorrelation_m)},
                   {"per_site", assign (sh.per_site)}});
  };
  top["simulation"] = [&] (const Json &v) {
    read_section (v, "simulation",
                  {{"ues_per_cell", assign (s.ues_per_cell)},
                   {"ue_speed_kmh", assign (s.ue_speed_kmh)},
                   {"a3_margin_db", assign (s.a3_margin_db)},
                   {"ttt_ms", assign (s.ttt_ms)},
                   {"a2_rsrp_threshold_dbm", assign (s.a2_rsrp_threshold_dbm)},
                   {"a2_rsrp_hysteresis_db", assign (s.a2_rsrp_hysteresis_db)},
                   {"a2_rsrq_threshold_db", assign (s.a2_rsrq_threshold_db)},
                   {"a2_rsrq_hysteresis_db", assign (s.a2_rsrq_hysteresis_db)},
                   {"duration_steps", assign (s.duration_steps)},
                   {"step_seconds", assign (s.step_seconds)},
                   {"t304_ms", assign (s.t304_ms)},
                   {"t310_ms", assign (s.t310_ms)},
                   {"rs_power_offset_db", assign (s.rs_power_offset_db)},
                   {"penetration_loss_db", assign (s.penetration_loss_db)}});
  };
  top["fault"] = [&] (const Json &v) {
    read_section (v, "fault", {{"faulty_cell", assign (c.suite.faulty_cell)}});
  };
  top["seeds"] = [&] (const Json &v) {
    read_section (v, "seeds",
                  {{"shadow_primary", assign (seeds.shadow_primary)},
                   {"shadow_reference", assign (seeds.shadow_reference)},
                   {"mobility_normal", assign (seeds.mobility_normal)},
                   {"mobility_problematic", assign (seeds.mobility_problematic)},
                   {"mobility_reference", assign (seeds.mobility_reference)}});
  };
  top["chunks"] = assign (c.suite.chunks);
  top["featurize"] = [&] (const Json &v) {
    read_section (v, "featurize",
                  {{"window", assign (c.window)},
                   {"step", assign (c.step)},
                   {"ngram", assign (c.ngram)}});
  };
  top["embed"] = [&] (const Json &v) {
    read_section (v, "embed",
                  {{"components", assign (c.components)},
                   {"auto_components", assign (c.auto_components)}});
  };
  top["detect"] = [&] (const Json &v) {
    read_section (v, "detect",
                  {{"k", assign (c.k)}, {"percentile", assign (c.percentile)}});
  };
  top["localize"] = [&] (const Json &v) {
    read_section (
      v, "localize",
      {{"weights",
        [&] (const Json &w) {
          if (!w.is_array () || w.size () != 4)
            {
              throw ConfigError ("localize.weights must be an array of 4 numbers");
            }
          for (std::size_t i = 0; i < 4; ++i)
            {
              if (!w[i].is_number ())
                {
                  throw ConfigError ("localize.weights must be an array of 4 numbers");
                }
              c.weights[i] = w[i].get<double> ();
            }
        }},
       {"amplify", assign (c.amplify)},
       {"twogram_scope",
        [&] (const Json &v2) {
          const auto s2 = v2.is_string () ? scope_from_name (v2.get<std::string> ())
                                          : std::nullopt;
          if (!s2)
            {
              throw ConfigError ("localize.twogram_scope must be one of anomalous, "
                                 "anomalous_vs_all_train, all");
            }
          c.twogram_scope = *s2;
        }},
       {"symmetry_mode", [&] (const Json &v2) {
          const auto m = v2.is_string () ? symmetry_from_name (v2.get<std::string> ())
                                         : std::nullopt;
          if (!m)
            {
              throw ConfigError ("localize.symmetry_mode must be per_2gram or pooled");
            }
          c.symmetry_mode = *m;
        }}});
  };

  read_section (j, "config", top);
  c.validate ();
  return c;
}

RunConfig
load_config (const std::filesystem::path &path)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw ConfigError ("cannot open config " + path.string ());
    }
  const auto j = Json::parse (in, nullptr, false);
  if (j.is_discarded ())
    {
      throw ConfigError ("config " + path.string () + " is not valid JSON");
    }
  try
    {
      return run_config_from_json (j);
    }
  catch (const ConfigError &e)
    {
      throw ConfigError (path.string () + ": " + e.what ());
    }
}

void
save_config (const std::filesystem::path &path, const RunConfig &config)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out << to_json (config).dump (2) << '\n';
}

std::uint64_t
fnv1a64 (std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char b : bytes)
    {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  return h;
}

std::string
config_hash (const RunConfig &config)
{
  char buf[17];
  std::snprintf (buf, sizeof buf, "%016llx",
                 static_cast<unsigned long long> (fnv1a64 (to_json (config).dump ())));
  return buf;
}

} // namespace sleepcell
