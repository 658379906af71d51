#include "sleepcell/simulator.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "sleepcell/error.hpp"

namespace sleepcell {

void
SimConfig::validate () const
{
  auto finite = [] (double v) { return std::isfinite (v); };
  if (ues_per_cell < 1)
    {
      throw ConfigError ("ues_per_cell must be >= 1");
    }
  if (!(ue_speed_kmh >= 0.0) || !finite (ue_speed_kmh))
    {
      throw ConfigError ("ue_speed_kmh must be finite and >= 0");
    }
  if (!finite (a3_margin_db) || !finite (a2_rsrp_threshold_dbm)
      || !finite (a2_rsrq_threshold_db) || !finite (rs_power_offset_db)
      || !finite (penetration_loss_db))
    {
      throw ConfigError ("thresholds must be finite");
    }
  if (!(a2_rsrp_hysteresis_db >= 0.0) || !(a2_rsrq_hysteresis_db >= 0.0)
      || !finite (a2_rsrp_hysteresis_db) || !finite (a2_rsrq_hysteresis_db))
    {
      throw ConfigError ("hysteresis must be finite and >= 0");
    }
  if (duration_steps <= 0)
    {
      throw ConfigError ("duration_steps must be > 0");
    }
  if (!(step_seconds > 0.0) || !finite (step_seconds))
    {
      throw ConfigError ("step_seconds must be > 0");
    }
  if (!(ttt_ms >= 0.0) || !(t304_ms >= 0.0) || !(t310_ms >= 0.0)
      || !finite (ttt_ms) || !finite (t304_ms) || !finite (t310_ms))
    {
      throw ConfigError ("timers must be finite and >= 0");
    }
}

std::int64_t
SimConfig::steps_for (double ms) const
{
  return static_cast<std::int64_t> (std::ceil (ms / (step_seconds * 1000.0) - 1e-9));
}

namespace {

enum class Procedure
{
  None,
  HandoverExecution,
  AccessFailure,
};

struct UeState
{
  UeId id = 0;
  Point position;
  Point waypoint;
  std::size_t serving = 0;
  bool a2_rsrp_active = false;
  bool a2_rsrq_active = false;
  long a3_candidate = -1;
  std::int64_t a3_steps = 0;
  Procedure procedure = Procedure::None;
  std::size_t procedure_target = 0;
  std::int64_t procedure_start = 0;
  std::size_t emitted = 0;
};

class Simulator
{
public:
  Simulator (const NetworkLayout &layout, const RadioMap &radio,
             const SimConfig &sim, const FaultConfig &fault)
    : m_layout (layout), m_radio (radio), m_sim (sim), m_fault (fault),
      m_rng (sim.rng_seed)
  {
    m_dominance = dominance_from_radio (layout, radio);
    if (fault.enabled)
      {
        m_faulty = layout.index_of (fault.faulty_cell);
      }
    m_ttt = std::max<std::int64_t> (sim.steps_for (sim.ttt_ms), 1);
    m_t304 = std::max<std::int64_t> (sim.steps_for (sim.t304_ms), 1);
    m_t310 = std::max<std::int64_t> (sim.steps_for (sim.t310_ms), 0);
    m_step_m = sim.ue_speed_kmh / 3.6 * sim.step_seconds;
  }

  SimulationResult run ()
  {
    const std::size_t n_ues
      = static_cast<std::size_t> (m_sim.ues_per_cell) * m_layout.size ();
    m_ues.resize (n_ues);
    for (std::size_t u = 0; u < n_ues; ++u)
      {
        auto &ue = m_ues[u];
        ue.id = static_cast<UeId> (u);
        ue.position = random_point ();
        ue.waypoint = random_point ();
        // Initial access; a failing cell is skipped silently.
        ue.serving = strongest (m_radio.grid.pixel_of (ue.position), true);
      }

    for (std::int64_t t = 0; t < m_sim.duration_steps; ++t)
      {
        for (auto &ue : m_ues)
          {
            step (ue, t);
            move (ue);
          }
      }

    SimulationResult result;
    result.log = std::move (m_log);
    result.truth = std::move (m_truth);
    result.dominance = std::move (m_dominance);
    return result;
  }

private:
  Point random_point ()
  {
    std::uniform_real_distribution<double> ux (m_layout.bounds.min.x,
                                               m_layout.bounds.max.x);
    std::uniform_real_distribution<double> uy (m_layout.bounds.min.y,
                                               m_layout.bounds.max.y);
    const double x = ux (m_rng);
    const double y = uy (m_rng);
    return Point{x, y};
  }

  void move (UeState &ue)
  {
    double dx = ue.waypoint.x - ue.position.x;
    double dy = ue.waypoint.y - ue.position.y;
    const double dist = std::hypot (dx, dy);
    if (dist <= m_step_m)
      {
        ue.position = ue.waypoint;
        ue.waypoint = random_point ();
        return;
      }
    ue.position.x += dx / dist * m_step_m;
    ue.position.y += dy / dist * m_step_m;
  }

  /// Strongest cell at a pixel, optionally skipping the faulty cell.
  std::size_t strongest (std::size_t px, bool healthy_only) const
  {
    std::size_t best = m_layout.size ();
    for (std::size_t c = 0; c < m_layout.size (); ++c)
      {
        if (healthy_only && m_fault.enabled && c == m_faulty)
          {
            continue;
          }
        if (best == m_layout.size () || m_radio.power (px, c) > m_radio.power (px, best))
          {
            best = c;
          }
      }
    return best;
  }

  void emit (UeState &ue, std::int64_t t, EventId event,
             std::optional<std::size_t> target)
  {
    MdtRecord r;
    r.event = event;
    r.ue = ue.id;
    r.t = t;
    r.location = ue.position;
    r.serving = m_layout.cells[ue.serving].id;
    if (target)
      {
        r.target = m_layout.cells[*target].id;
      }

    bool affected = false;
    if (m_fault.enabled)
      {
        affected = (r.target && *r.target == m_fault.faulty_cell)
                   || m_dominance.at (ue.position) == m_fault.faulty_cell;
      }
    m_truth.push_back (GroundTruthEntry{ue.id, ue.emitted++, affected});
    m_log.push_back (r);
  }

  void reset_a3 (UeState &ue)
  {
    ue.a3_candidate = -1;
    ue.a3_steps = 0;
  }

  void step (UeState &ue, std::int64_t t)
  {
    const std::size_t px = m_radio.grid.pixel_of (ue.position);

    if (ue.procedure == Procedure::HandoverExecution)
      {
        if (t >= ue.procedure_start + 1)
          {
            emit (ue, t, EventId::HoComplete, ue.procedure_target);
            ue.serving = ue.procedure_target;
            ue.procedure = Procedure::None;
            reset_a3 (ue);
          }
        return;
      }
    if (ue.procedure == Procedure::AccessFailure)
      {
        if (t == ue.procedure_start + m_t304)
          {
            emit (ue, t, EventId::PlProblem, std::nullopt);
          }
        if (t >= ue.procedure_start + m_t304 + m_t310)
          {
            emit (ue, t, EventId::Rlf, std::nullopt);
            const std::size_t target = strongest (px, true);
            emit (ue, t, EventId::RlfReestab, target);
            ue.serving = target;
            ue.procedure = Procedure::None;
            reset_a3 (ue);
          }
        return;
      }

    const double rsrp = m_radio.power (px, ue.serving) - m_sim.rs_power_offset_db
                        - m_sim.penetration_loss_db;
    const double rsrq = m_radio.power (px, ue.serving) - m_radio.total_power_dbm[px];

    const double rsrp_thr = m_sim.a2_rsrp_threshold_dbm;
    const double rsrp_hys = m_sim.a2_rsrp_hysteresis_db;
    if (!ue.a2_rsrp_active && rsrp + rsrp_hys < rsrp_thr)
      {
        ue.a2_rsrp_active = true;
        emit (ue, t, EventId::A2RsrpEnter, std::nullopt);
      }
    else if (ue.a2_rsrp_active && rsrp - rsrp_hys > rsrp_thr)
      {
        ue.a2_rsrp_active = false;
        emit (ue, t, EventId::A2RsrpLeave, std::nullopt);
      }

    const double rsrq_thr = m_sim.a2_rsrq_threshold_db;
    const double rsrq_hys = m_sim.a2_rsrq_hysteresis_db;
    if (!ue.a2_rsrq_active && rsrq + rsrq_hys < rsrq_thr)
      {
        ue.a2_rsrq_active = true;
        emit (ue, t, EventId::A2RsrqEnter, std::nullopt);
      }
    else if (ue.a2_rsrq_active && rsrq - rsrq_hys > rsrq_thr)
      {
        // Leaving condition re-arms the trigger; it is not reported.
        ue.a2_rsrq_active = false;
      }

    std::size_t best = m_layout.size ();
    for (std::size_t c = 0; c < m_layout.size (); ++c)
      {
        if (c == ue.serving)
          {
            continue;
          }
        if (best == m_layout.size () || m_radio.power (px, c) > m_radio.power (px, best))
          {
            best = c;
          }
      }
    if (best == m_layout.size ()
        || !(m_radio.power (px, best) > m_radio.power (px, ue.serving) + m_sim.a3_margin_db))
      {
        reset_a3 (ue);
        return;
      }
    if (ue.a3_candidate == static_cast<long> (best))
      {
        ++ue.a3_steps;
      }
    else
      {
        ue.a3_candidate = static_cast<long> (best);
        ue.a3_steps = 1;
      }
    if (ue.a3_steps < m_ttt)
      {
        return;
      }

    emit (ue, t, EventId::A3Rsrp, best);
    emit (ue, t, EventId::HoCommand, best);
    reset_a3 (ue);
    ue.procedure_target = best;
    ue.procedure_start = t;
    ue.procedure = (m_fault.enabled && best == m_faulty)
                     ? Procedure::AccessFailure
                     : Procedure::HandoverExecution;
  }

  const NetworkLayout &m_layout;
  const RadioMap &m_radio;
  SimConfig m_sim;
  FaultConfig m_fault;
  std::mt19937_64 m_rng;
  DominanceMap m_dominance;
  std::size_t m_faulty = 0;
  std::int64_t m_ttt = 1;
  std::int64_t m_t304 = 1;
  std::int64_t m_t310 = 0;
  double m_step_m = 0.0;
  std::vector<UeState> m_ues;
  std::vector<MdtRecord> m_log;
  std::vector<GroundTruthEntry> m_truth;
};

} // namespace

SimulationResult
simulate (const NetworkLayout &layout, const RadioMap &radio,
          const SimConfig &sim, const FaultConfig &fault)
{
  sim.validate ();
  if (layout.cells.empty ())
    {
      throw ConfigError ("layout has no cells");
    }
  if (radio.cell_count != layout.size ())
    {
      throw ConfigError ("radio map does not match the layout");
    }
  if (fault.enabled && !layout.contains (fault.faulty_cell))
    {
      throw ConfigError ("faulty cell " + std::to_string (fault.faulty_cell)
                         + " is not in the layout");
    }
  if (fault.enabled && layout.size () < 2)
    {
      throw ConfigError ("a faulty cell needs at least one healthy cell");
    }
  return Simulator (layout, radio, sim, fault).run ();
}

SimulationResult
simulate (const NetworkLayout &layout, const ShadowingField &shadowing,
          const SimConfig &sim, const FaultConfig &fault)
{
  const RadioMap radio = build_radio_map (layout, shadowing);
  return simulate (layout, radio, sim, fault);
}

void
write_ground_truth (const std::filesystem::path &path,
                    std::span<const GroundTruthEntry> truth)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  for (const auto &e : truth)
    {
      nlohmann::ordered_json j;
      j["ue"] = e.ue;
      j["event_index"] = e.event_index;
      j["fault_affected"] = e.fault_affected;
      out << j.dump () << '\n';
    }
  if (!out)
    {
      throw DataError ("write failed for " + path.string ());
    }
}

std::vector<GroundTruthEntry>
read_ground_truth (const std::filesystem::path &path)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw DataError ("cannot open " + path.string ());
    }
  std::vector<GroundTruthEntry> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline (in, line))
    {
      ++number;
      if (line.empty ())
        {
          continue;
        }
      auto j = nlohmann::json::parse (line, nullptr, false);
      if (j.is_discarded () || !j.contains ("ue") || !j.contains ("event_index")
          || !j.contains ("fault_affected") || !j["ue"].is_number_integer ()
          || !j["event_index"].is_number_unsigned ()
          || !j["fault_affected"].is_boolean ())
        {
          throw DataError (path.string () + ": bad ground-truth line "
                           + std::to_string (number));
        }
      out.push_back (GroundTruthEntry{j["ue"].get<UeId> (),
                                      j["event_index"].get<std::size_t> (),
                                      j["fault_affected"].get<bool> ()});
    }
  return out;
}

} // namespace sleepcell
