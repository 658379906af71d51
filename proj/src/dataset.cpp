#include "sleepcell/dataset.hpp"

#include "sleepcell/error.hpp"

namespace sleepcell {

namespace {

std::uint64_t
splitmix64 (std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

SeedSet
SeedSet::derive (std::uint64_t base)
{
  SeedSet s;
  s.shadow_primary = splitmix64 (base * 8 + 1);
  s.shadow_reference = splitmix64 (base * 8 + 2);
  s.mobility_normal = splitmix64 (base * 8 + 3);
  s.mobility_problematic = splitmix64 (base * 8 + 4);
  s.mobility_reference = splitmix64 (base * 8 + 5);
  return s;
}

FaultLabels::FaultLabels (std::span<const GroundTruthEntry> truth)
{
  for (const auto &e : truth)
    {
      auto &flags = m_flags[e.ue];
      if (flags.size () <= e.event_index)
        {
          flags.resize (e.event_index + 1, 0);
        }
      flags[e.event_index] = e.fault_affected ? 1 : 0;
    }
}

bool
FaultLabels::affected (UeId ue, std::size_t event_index) const
{
  auto it = m_flags.find (ue);
  if (it == m_flags.end () || event_index >= it->second.size ())
    {
      return false;
    }
  return it->second[event_index] != 0;
}

const Dataset &
DatasetSuite::get (DatasetRole role) const
{
  switch (role)
    {
    case DatasetRole::Normal:
      return normal;
    case DatasetRole::Problematic:
      return problematic;
    case DatasetRole::Reference:
      return reference;
    }
  throw DataError ("unknown dataset role");
}

Dataset
make_dataset (DatasetRole role, SimulationResult result, int chunks)
{
  Dataset d;
  d.role = role;
  d.log = std::move (result.log);
  d.truth = std::move (result.truth);
  d.labels = FaultLabels (d.truth);
  d.dominance = std::move (result.dominance);
  const auto calls = group_calls (d.log);
  d.chunks = split_chunks (calls, role, chunks);
  return d;
}

DatasetSuite
generate_dataset_suite (const SuiteConfig &config)
{
  if (config.chunks < 1)
    {
      throw ConfigError ("chunk count must be >= 1");
    }
  DatasetSuite suite;
  suite.layout = make_hex_layout (config.layout);

  const auto primary
    = build_radio_map (suite.layout, generate_shadowing (suite.layout, config.shadowing,
                                                         config.seeds.shadow_primary));
  const auto secondary
    = build_radio_map (suite.layout, generate_shadowing (suite.layout, config.shadowing,
                                                         config.seeds.shadow_reference));

  const FaultConfig healthy{false, config.faulty_cell};
  const FaultConfig faulty{true, config.faulty_cell};

  SimConfig sim = config.sim;
  sim.rng_seed = config.seeds.mobility_normal;
  suite.normal = make_dataset (DatasetRole::Normal,
                               simulate (suite.layout, primary, sim, healthy),
                               config.chunks);

  sim.rng_seed = config.seeds.mobility_problematic;
  suite.problematic = make_dataset (DatasetRole::Problematic,
                                    simulate (suite.layout, primary, sim, faulty),
                                    config.chunks);

  sim.rng_seed = config.seeds.mobility_reference;
  suite.reference = make_dataset (DatasetRole::Reference,
                                  simulate (suite.layout, secondary, sim, healthy),
                                  config.chunks);
  return suite;
}

} // namespace sleepcell
