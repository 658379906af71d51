#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sleepcell/events.hpp"
#include "sleepcell/radio.hpp"

namespace sleepcell {

struct SimConfig
{
  int ues_per_cell = 15;
  double ue_speed_kmh = 30.0;
  double a3_margin_db = 3.0;
  double ttt_ms = 256.0;
  double a2_rsrp_threshold_dbm = -110.0;
  double a2_rsrp_hysteresis_db = 3.0;
  double a2_rsrq_threshold_db = -10.0;
  double a2_rsrq_hysteresis_db = 2.0;
  std::int64_t duration_steps = 5720;
  double step_seconds = 0.1;
  /// Random-access supervision before the physical-layer problem is declared.
  double t304_ms = 500.0;
  /// Time from the physical-layer problem to radio link failure.
  double t310_ms = 1000.0;
  /// Reference-signal share of the total transmit power (10 log10 of the
  /// subcarrier count); turns received power into RSRP.
  double rs_power_offset_db = 27.8;
  /// Building penetration loss applied to RSRP before the A2 RSRP check.
  double penetration_loss_db = 15.0;
  std::uint64_t rng_seed = 1;

  void validate () const;
  /// Steps needed to cover `ms`, rounded up (256 ms -> 3 steps of 100 ms).
  std::int64_t steps_for (double ms) const;
};

struct FaultConfig
{
  bool enabled = false;
  CellId faulty_cell = 1;
};

/// Per-event fault label, keyed by (UE, index of the event in its call).
struct GroundTruthEntry
{
  UeId ue = 0;
  std::size_t event_index = 0;
  bool fault_affected = false;

  friend bool operator== (const GroundTruthEntry &,
                          const GroundTruthEntry &) = default;
};

struct SimulationResult
{
  std::vector<MdtRecord> log; // ordered by (t, ue)
  std::vector<GroundTruthEntry> truth;
  DominanceMap dominance;
};

/// Random-waypoint UEs with A2/A3 measurement reporting and handover. When
/// the fault is enabled every random access towards the faulty cell fails:
/// HO COMMAND is followed by PL PROBLEM, RLF and RLF REESTAB. to the
/// strongest healthy cell. Deterministic for a fixed `rng_seed`.
SimulationResult simulate (const NetworkLayout &layout,
                           const ShadowingField &shadowing,
                           const SimConfig &sim, const FaultConfig &fault);

/// Same as above with a precomputed radio map of the same layout.
SimulationResult simulate (const NetworkLayout &layout, const RadioMap &radio,
                           const SimConfig &sim, const FaultConfig &fault);

void write_ground_truth (const std::filesystem::path &path,
                         std::span<const GroundTruthEntry> truth);
std::vector<GroundTruthEntry>
read_ground_truth (const std::filesystem::path &path);

} // namespace sleepcell
