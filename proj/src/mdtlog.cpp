#include "sleepcell/mdtlog.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "sleepcell/error.hpp"

namespace sleepcell {

using nlohmann::json;

std::string_view
role_name (DatasetRole role)
{
  switch (role)
    {
    case DatasetRole::Normal:
      return "normal";
    case DatasetRole::Problematic:
      return "problematic";
    case DatasetRole::Reference:
      return "reference";
    }
  return "unknown";
}

DatasetRole
role_from_name (std::string_view name)
{
  for (auto role :
       {DatasetRole::Normal, DatasetRole::Problematic, DatasetRole::Reference})
    {
      if (role_name (role) == name)
        {
          return role;
        }
    }
  throw DataError ("unknown dataset role '" + std::string (name) + "'");
}

std::string
serialize_record (const MdtRecord &r)
{
  nlohmann::ordered_json j;
  j["ue"] = r.ue;
  j["t"] = r.t;
  j["event"] = event_name (r.event);
  j["x"] = r.location.x;
  j["y"] = r.location.y;
  j["serving"] = r.serving;
  j["target"] = r.target ? nlohmann::ordered_json (*r.target) : nullptr;
  return j.dump ();
}

namespace {

const json &
require (const json &obj, const char *key, std::size_t line)
{
  auto it = obj.find (key);
  if (it == obj.end ())
    {
      throw ParseError (line, std::string ("missing field '") + key + "'");
    }
  return *it;
}

std::int64_t
require_int (const json &obj, const char *key, std::size_t line)
{
  const json &v = require (obj, key, line);
  if (!v.is_number_integer ())
    {
      throw ParseError (line, std::string ("field '") + key
                                  + "' must be an integer");
    }
  return v.get<std::int64_t> ();
}

double
require_number (const json &obj, const char *key, std::size_t line)
{
  const json &v = require (obj, key, line);
  if (!v.is_number ())
    {
      throw ParseError (line, std::string ("field '") + key
                                  + "' must be numeric");
    }
  return v.get<double> ();
}

} // namespace

MdtRecord
parse_record (std::string_view line, std::size_t line_number)
{
  json j = json::parse (line.begin (), line.end (), nullptr, false);
  if (j.is_discarded () || !j.is_object ())
    {
      throw ParseError (line_number, "not a JSON object");
    }

  MdtRecord r;
  const json &ev = require (j, "event", line_number);
  if (!ev.is_string ())
    {
      throw ParseError (line_number, "field 'event' must be a string");
    }
  auto id = event_from_name (ev.get<std::string> ());
  if (!id)
    {
      throw ParseError (line_number,
                        "unknown event '" + ev.get<std::string> () + "'");
    }
  r.event = *id;
  r.ue = static_cast<UeId> (require_int (j, "ue", line_number));
  r.t = require_int (j, "t", line_number);
  r.location.x = require_number (j, "x", line_number);
  r.location.y = require_number (j, "y", line_number);
  r.serving = static_cast<CellId> (require_int (j, "serving", line_number));

  auto tgt = j.find ("target");
  if (tgt != j.end () && !tgt->is_null ())
    {
      if (!tgt->is_number_integer ())
        {
          throw ParseError (line_number, "field 'target' must be an integer");
        }
      r.target = tgt->get<CellId> ();
    }
  if (requires_target (r.event) && !r.target)
    {
      throw ParseError (line_number, "event '" + std::string (event_name (r.event))
                                         + "' requires a target cell");
    }
  return r;
}

void
write_log (std::ostream &out, std::span<const MdtRecord> records)
{
  for (const auto &r : records)
    {
      out << serialize_record (r) << '\n';
    }
}

void
write_log (const std::filesystem::path &path,
           std::span<const MdtRecord> records)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  write_log (out, records);
  if (!out)
    {
      throw DataError ("write failed for " + path.string ());
    }
}

std::vector<MdtRecord>
read_records (std::istream &in)
{
  std::vector<MdtRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline (in, line))
    {
      ++number;
      if (line.find_first_not_of (" \t\r") == std::string::npos)
        {
          continue;
        }
      records.push_back (parse_record (line, number));
    }
  return records;
}

std::vector<Call>
group_calls (std::span<const MdtRecord> records)
{
  std::map<UeId, std::vector<MdtRecord>> by_ue;
  for (const auto &r : records)
    {
      by_ue[r.ue].push_back (r);
    }

  std::vector<Call> calls;
  calls.reserve (by_ue.size ());
  for (auto &[ue, recs] : by_ue)
    {
      std::stable_sort (recs.begin (), recs.end (),
                        [] (const MdtRecord &a, const MdtRecord &b) {
                          return a.t < b.t;
                        });
      calls.push_back (Call{ue, std::move (recs)});
    }
  return calls;
}

std::vector<Call>
parse_log (std::istream &in)
{
  auto records = read_records (in);
  return group_calls (records);
}

std::vector<Call>
parse_log (const std::filesystem::path &path)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw DataError ("cannot open " + path.string ());
    }
  try
    {
      return parse_log (in);
    }
  catch (const ParseError &e)
    {
      throw ParseError (e.line (), path.string () + ": " + e.what ());
    }
}

std::vector<MdtRecord>
flatten (std::span<const Call> calls)
{
  std::vector<MdtRecord> out;
  for (const auto &c : calls)
    {
      out.insert (out.end (), c.records.begin (), c.records.end ());
    }
  return out;
}

std::vector<Chunk>
split_chunks (std::span<const Call> calls, DatasetRole role, int chunks)
{
  if (chunks < 1)
    {
      throw ConfigError ("chunk count must be positive");
    }
  std::vector<Chunk> out (static_cast<std::size_t> (chunks));
  for (int i = 0; i < chunks; ++i)
    {
      out[i].role = role;
      out[i].index = i;
    }
  for (const auto &c : calls)
    {
      out[static_cast<std::size_t> (((c.ue % chunks) + chunks) % chunks)]
        .calls.push_back (c);
    }
  return out;
}

std::vector<FoldPair>
make_fold_pairs (std::span<const Chunk> train, std::span<const Chunk> test)
{
  if (train.empty () || test.empty ())
    {
      throw DataError ("fold pairing needs at least one chunk on each side");
    }
  if (train.size () != test.size ())
    {
      throw DataError ("chunk count mismatch: " + std::to_string (train.size ())
                       + " training vs " + std::to_string (test.size ())
                       + " testing");
    }
  const DatasetRole train_role = train.front ().role;
  const DatasetRole test_role = test.front ().role;
  for (const auto &c : train)
    {
      if (c.role != train_role)
        {
          throw DataError ("training chunks mix dataset roles");
        }
    }
  for (const auto &c : test)
    {
      if (c.role != test_role)
        {
          throw DataError ("testing chunks mix dataset roles");
        }
    }
  if (train_role == test_role)
    {
      throw DataError ("training and testing chunks share role '"
                       + std::string (role_name (train_role)) + "'");
    }

  std::vector<FoldPair> pairs;
  pairs.reserve (train.size () * test.size ());
  for (std::size_t i = 0; i < train.size (); ++i)
    {
      for (std::size_t j = 0; j < test.size (); ++j)
        {
          pairs.push_back (FoldPair{test_role, i, j});
        }
    }
  return pairs;
}

} // namespace sleepcell
