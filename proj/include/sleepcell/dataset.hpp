#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sleepcell/mdtlog.hpp"
#include "sleepcell/simulator.hpp"

namespace sleepcell {

/// Named seeds; every random draw of a suite flows from one of these.
struct SeedSet
{
  std::uint64_t shadow_primary = 11;   // normal + problematic
  std::uint64_t shadow_reference = 12; // reference
  std::uint64_t mobility_normal = 21;
  std::uint64_t mobility_problematic = 22;
  std::uint64_t mobility_reference = 23;

  /// Deterministic derivation of all five seeds from one value.
  static SeedSet derive (std::uint64_t base);

  friend bool operator== (const SeedSet &, const SeedSet &) = default;
};

struct SuiteConfig
{
  LayoutConfig layout;
  ShadowingConfig shadowing;
  SimConfig sim;
  CellId faulty_cell = 1;
  SeedSet seeds;
  int chunks = 6;
};

/// Fault label of every event, by UE and position in the UE's call.
class FaultLabels
{
public:
  FaultLabels () = default;
  explicit FaultLabels (std::span<const GroundTruthEntry> truth);

  /// False for unknown (UE, index) pairs.
  bool affected (UeId ue, std::size_t event_index) const;
  bool empty () const { return m_flags.empty (); }

private:
  std::unordered_map<UeId, std::vector<std::uint8_t>> m_flags;
};

struct Dataset
{
  DatasetRole role = DatasetRole::Normal;
  std::vector<MdtRecord> log;
  std::vector<GroundTruthEntry> truth;
  FaultLabels labels;
  DominanceMap dominance;
  std::vector<Chunk> chunks;
};

struct DatasetSuite
{
  NetworkLayout layout;
  Dataset normal;
  Dataset problematic;
  Dataset reference;

  const Dataset &get (DatasetRole role) const;
};

/// Builds one dataset from an already-simulated result.
Dataset make_dataset (DatasetRole role, SimulationResult result, int chunks);

/// normal: fault off, shadow_primary, mobility_normal;
/// problematic: fault on, shadow_primary, mobility_problematic;
/// reference: fault off, shadow_reference, mobility_reference.
DatasetSuite generate_dataset_suite (const SuiteConfig &config);

} // namespace sleepcell
