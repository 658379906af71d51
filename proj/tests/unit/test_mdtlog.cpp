#include <doctest.h>

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "sleepcell/error.hpp"
#include "sleepcell/mdtlog.hpp"

using namespace sleepcell;

namespace {

MdtRecord
rec (UeId ue, std::int64_t t, EventId e, std::optional<CellId> target = std::nullopt)
{
  MdtRecord r;
  r.ue = ue;
  r.t = t;
  r.event = e;
  r.location = Point{1.25 * t, -3.5};
  r.serving = 4;
  r.target = target;
  return r;
}

} // namespace

TEST_CASE ("event names and codes are stable")
{
  const char *names[] = {"PL PROBLEM",    "RLF",           "RLF REESTAB.",
                         "A2 RSRP ENTER", "A2 RSRP LEAVE", "A2 RSRQ ENTER",
                         "A3 RSRP",       "HO COMMAND",    "HO COMPLETE"};
  REQUIRE (kAllEvents.size () == 9);
  for (std::size_t i = 0; i < kAllEvents.size (); ++i)
    {
      CHECK (event_code (kAllEvents[i]) == static_cast<int> (i));
      CHECK (event_name (kAllEvents[i]) == names[i]);
      CHECK (event_from_name (names[i]) == kAllEvents[i]);
    }
  CHECK_FALSE (event_from_name ("HO FAILURE"));
  CHECK (event_token (EventId::RlfReestab) == "RLF_REESTAB");
}

TEST_CASE ("record serialization")
{
  auto r = rec (7, 12, EventId::HoCommand, 1);
  r.location = Point{1.5, -3.0};
  CHECK (serialize_record (r)
         == R"({"ue":7,"t":12,"event":"HO COMMAND","x":1.5,"y":-3.0,"serving":4,"target":1})");

  auto a2 = rec (9, 3, EventId::A2RsrpEnter);
  CHECK (parse_record (serialize_record (a2), 1) == a2);
  CHECK (serialize_record (a2).find ("\"target\":null") != std::string::npos);
}

TEST_CASE ("round trip is field-exact")
{
  std::vector<MdtRecord> records;
  records.push_back (rec (3, 0, EventId::A3Rsrp, 2));
  records.push_back (rec (3, 1, EventId::HoCommand, 2));
  records.push_back (rec (3, 2, EventId::HoComplete, 2));
  records.push_back (rec (5, 0, EventId::A2RsrqEnter));
  records.back ().location = Point{0.1 + 0.2, 1e-17};
  records.push_back (rec (5, 7, EventId::PlProblem));
  records.push_back (rec (5, 17, EventId::Rlf));
  records.push_back (rec (5, 17, EventId::RlfReestab, 6));

  std::stringstream buf;
  write_log (buf, records);
  CHECK (read_records (buf) == records);
}

TEST_CASE ("parse_log groups by UE and keeps file order on equal times")
{
  SUBCASE ("empty file")
  {
    std::istringstream in ("");
    CHECK (parse_log (in).empty ());
  }
  SUBCASE ("3 records for ue 7, 2 for ue 9")
  {
    std::vector<MdtRecord> records{rec (9, 4, EventId::A3Rsrp, 2), rec (7, 2, EventId::A2RsrpEnter),
                                   rec (7, 1, EventId::A2RsrqEnter), rec (9, 1, EventId::A3Rsrp, 3),
                                   rec (7, 1, EventId::A2RsrpLeave)};
    std::stringstream buf;
    write_log (buf, records);
    const auto calls = parse_log (buf);
    REQUIRE (calls.size () == 2);
    CHECK (calls[0].ue == 7);
    CHECK (calls[0].records.size () == 3);
    CHECK (calls[1].ue == 9);
    CHECK (calls[1].records.size () == 2);
    CHECK (calls[0].records[0].event == EventId::A2RsrqEnter);
    CHECK (calls[0].records[1].event == EventId::A2RsrpLeave);
    CHECK (calls[0].records[2].t == 2);
    CHECK (calls[1].records[0].t == 1);
  }
  SUBCASE ("blank lines are skipped")
  {
    std::istringstream in ("\n" + serialize_record (rec (1, 0, EventId::Rlf)) + "\n\n");
    CHECK (parse_log (in).size () == 1);
  }
}

TEST_CASE ("malformed lines name their line number")
{
  const std::string good = serialize_record (rec (1, 0, EventId::Rlf));
  auto line_of_error = [&] (const std::string &bad) -> std::size_t {
    std::istringstream in (good + "\n" + bad + "\n");
    try
      {
        read_records (in);
      }
    catch (const ParseError &e)
      {
        return e.line ();
      }
    return 0;
  };
  CHECK (line_of_error (
           R"({"ue":7,"t":12,"event":"HO COMMAND","x":1.5,"y":-3.0,"serving":4,"target":null})")
         == 2);
  CHECK (line_of_error (R"({"ue":7,"t":12,"event":"HO COMMAND","x":1.5,"y":-3.0,"serving":4})")
         == 2);
  CHECK (line_of_error (R"({"ue":7,"t":12,"event":"HANDOVER","x":1.5,"y":-3.0,"serving":4})")
         == 2);
  CHECK (line_of_error (R"({"ue":7,"t":12,"event":"RLF","x":"a","y":-3.0,"serving":4})") == 2);
  CHECK (line_of_error (R"({"ue":7,"event":"RLF","x":1.0,"y":-3.0,"serving":4})") == 2);
  CHECK (line_of_error ("not json") == 2);
  CHECK_THROWS_AS (parse_log (std::filesystem::path ("/nonexistent/log.jsonl")), DataError);
}

TEST_CASE ("flatten inverts grouping")
{
  std::vector<MdtRecord> records{rec (2, 0, EventId::A3Rsrp, 1), rec (2, 1, EventId::HoCommand, 1),
                                 rec (4, 0, EventId::A2RsrpEnter)};
  const auto calls = group_calls (records);
  CHECK (flatten (calls) == records);
}

TEST_CASE ("chunks partition the UEs")
{
  std::vector<Call> calls;
  for (UeId ue = 0; ue < 40; ++ue)
    {
      calls.push_back (Call{ue, {rec (ue, 0, EventId::Rlf)}});
    }
  const auto chunks = split_chunks (calls, DatasetRole::Problematic, 6);
  REQUIRE (chunks.size () == 6);
  std::set<UeId> seen;
  std::size_t total = 0;
  for (const auto &c : chunks)
    {
      CHECK (c.role == DatasetRole::Problematic);
      for (const auto &call : c.calls)
        {
          CHECK (seen.insert (call.ue).second);
        }
      total += c.calls.size ();
    }
  CHECK (total == calls.size ());
  CHECK_THROWS_AS (split_chunks (calls, DatasetRole::Normal, 0), ConfigError);
}

TEST_CASE ("fold pairing")
{
  auto chunks = [] (DatasetRole role, int n) {
    std::vector<Chunk> out (static_cast<std::size_t> (n));
    for (int i = 0; i < n; ++i)
      {
        out[i].role = role;
        out[i].index = i;
      }
    return out;
  };
  const auto normal6 = chunks (DatasetRole::Normal, 6);
  const auto pairs = make_fold_pairs (normal6, chunks (DatasetRole::Problematic, 6));
  CHECK (pairs.size () == 36);
  CHECK (pairs.front ().train_index == 0);
  CHECK (pairs.back ().test_index == 5);
  CHECK (make_fold_pairs (chunks (DatasetRole::Normal, 1), chunks (DatasetRole::Reference, 1))
           .size ()
         == 1);
  CHECK_THROWS_AS (make_fold_pairs (normal6, std::vector<Chunk>{}), DataError);
  CHECK_THROWS_AS (make_fold_pairs (normal6, chunks (DatasetRole::Problematic, 5)), DataError);
  CHECK_THROWS_AS (make_fold_pairs (normal6, chunks (DatasetRole::Normal, 6)), DataError);
}

TEST_CASE ("dataset role names")
{
  for (const auto role : {DatasetRole::Normal, DatasetRole::Problematic, DatasetRole::Reference})
    {
      CHECK (role_from_name (role_name (role)) == role);
    }
  CHECK_THROWS_AS (role_from_name ("faulty"), DataError);
}
