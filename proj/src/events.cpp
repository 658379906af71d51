#include "sleepcell/events.hpp"

namespace sleepcell {

namespace {

constexpr std::array<std::string_view, kEventCount> kNames = {
  "PL PROBLEM",    "RLF",           "RLF REESTAB.",
  "A2 RSRP ENTER", "A2 RSRP LEAVE", "A2 RSRQ ENTER",
  "A3 RSRP",       "HO COMMAND",    "HO COMPLETE",
};

constexpr std::array<std::string_view, kEventCount> kTokens = {
  "PL_PROBLEM",    "RLF",           "RLF_REESTAB",
  "A2_RSRP_ENTER", "A2_RSRP_LEAVE", "A2_RSRQ_ENTER",
  "A3_RSRP",       "HO_COMMAND",    "HO_COMPLETE",
};

} // namespace

std::string_view
event_name (EventId e)
{
  return kNames.at (static_cast<std::size_t> (e));
}

std::string_view
event_token (EventId e)
{
  return kTokens.at (static_cast<std::size_t> (e));
}

std::optional<EventId>
event_from_name (std::string_view name)
{
  for (std::size_t i = 0; i < kEventCount; ++i)
    {
      if (kNames[i] == name)
        {
          return kAllEvents[i];
        }
    }
  return std::nullopt;
}

} // namespace sleepcell
