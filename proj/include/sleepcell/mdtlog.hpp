#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sleepcell/events.hpp"

namespace sleepcell {

/// The three kinds of network behaviour a dataset can represent.
enum class DatasetRole
{
  Normal,
  Problematic,
  Reference,
};

std::string_view role_name (DatasetRole role);
DatasetRole role_from_name (std::string_view name);

/// A UE-partitioned slice of one dataset.
struct Chunk
{
  DatasetRole role = DatasetRole::Normal;
  int index = 0;
  std::vector<Call> calls;
};

/// One (training chunk, testing chunk) combination of the K-fold cross.
struct FoldPair
{
  DatasetRole test_role = DatasetRole::Problematic;
  std::size_t train_index = 0;
  std::size_t test_index = 0;
};

/// One JSONL line:
/// {"ue":7,"t":12,"event":"HO COMMAND","x":1.5,"y":-3.0,"serving":4,"target":1}
std::string serialize_record (const MdtRecord &record);

/// Decodes one JSONL line. `line_number` is only used for error messages.
MdtRecord parse_record (std::string_view line, std::size_t line_number);

void write_log (std::ostream &out, std::span<const MdtRecord> records);
void write_log (const std::filesystem::path &path,
                std::span<const MdtRecord> records);

/// Reads records; blank lines are skipped. Throws ParseError naming the line.
std::vector<MdtRecord> read_records (std::istream &in);

/// Groups records into calls by UE (ascending UE id), stable-sorted by t.
std::vector<Call> group_calls (std::span<const MdtRecord> records);

std::vector<Call> parse_log (std::istream &in);
std::vector<Call> parse_log (const std::filesystem::path &path);

/// Flattens calls back into a record list in call order.
std::vector<MdtRecord> flatten (std::span<const Call> calls);

/// Splits calls into `chunks` groups by UE id modulo chunk count.
std::vector<Chunk> split_chunks (std::span<const Call> calls, DatasetRole role,
                                 int chunks);

/// Full cross product of training and testing chunks. Both sides must be
/// non-empty, have equal counts, and come from different roles.
std::vector<FoldPair> make_fold_pairs (std::span<const Chunk> train,
                                       std::span<const Chunk> test);

} // namespace sleepcell
