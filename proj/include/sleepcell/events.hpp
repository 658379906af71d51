#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace sleepcell {

using CellId = int;
using UeId = int;

struct Point
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator== (const Point &, const Point &) = default;
};

/// MDT triggering events. The integer codes are stable and follow this order.
enum class EventId : std::uint8_t
{
  PlProblem = 0,
  Rlf = 1,
  RlfReestab = 2,
  A2RsrpEnter = 3,
  A2RsrpLeave = 4,
  A2RsrqEnter = 5,
  A3Rsrp = 6,
  HoCommand = 7,
  HoComplete = 8,
};

inline constexpr std::size_t kEventCount = 9;

inline constexpr std::array<EventId, kEventCount> kAllEvents = {
  EventId::PlProblem,   EventId::Rlf,         EventId::RlfReestab,
  EventId::A2RsrpEnter, EventId::A2RsrpLeave, EventId::A2RsrqEnter,
  EventId::A3Rsrp,      EventId::HoCommand,   EventId::HoComplete,
};

constexpr int event_code (EventId e) { return static_cast<int> (e); }

/// Log name of an event, e.g. "A2 RSRP ENTER" or "RLF REESTAB.".
std::string_view event_name (EventId e);

std::optional<EventId> event_from_name (std::string_view name);

/// Short identifier used in CSV headers and file names (e.g. "A2_RSRP_ENTER").
std::string_view event_token (EventId e);

/// Events whose report always names a target cell.
constexpr bool requires_target (EventId e)
{
  return e == EventId::A3Rsrp || e == EventId::HoCommand
         || e == EventId::HoComplete || e == EventId::RlfReestab;
}

/// One event-triggered MDT measurement report.
struct MdtRecord
{
  EventId event = EventId::A3Rsrp;
  UeId ue = 0;
  std::int64_t t = 0; // simulation step index
  Point location;
  CellId serving = 0;
  std::optional<CellId> target;

  friend bool operator== (const MdtRecord &, const MdtRecord &) = default;
};

/// All reports of one UE, ordered by time. One UE carries one call.
struct Call
{
  UeId ue = 0;
  std::vector<MdtRecord> records;

  friend bool operator== (const Call &, const Call &) = default;
};

} // namespace sleepcell
