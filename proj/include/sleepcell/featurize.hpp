#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sleepcell/error.hpp"
#include "sleepcell/events.hpp"

namespace sleepcell {

/// A window of consecutive events cut from one call.
struct SubCall
{
  UeId ue = 0;
  std::size_t call_index = 0;
  /// Position of the first record inside the parent call.
  std::size_t offset = 0;
  std::vector<MdtRecord> records;

  std::vector<EventId> events () const;
};

struct WindowSpan
{
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator== (const WindowSpan &, const WindowSpan &) = default;
};

/// Windows of at most `m` events starting every `n` events. Windows shorter
/// than two events are dropped. Throws ConfigError unless m >= 2, 1 <= n <= m.
std::vector<WindowSpan> window_spans (std::size_t length, std::size_t m,
                                      std::size_t n);

std::vector<SubCall> sliding_window (const Call &call, std::size_t call_index,
                                     std::size_t m = 15, std::size_t n = 10);

/// Windows every call; `call_index` is the position in `calls`.
std::vector<SubCall> sliding_window (std::span<const Call> calls,
                                     std::size_t m = 15, std::size_t n = 10);

/// Counts of all overlapping length-`n` sub-sequences.
template <typename T>
std::map<std::vector<T>, std::size_t>
ngram_counts (std::span<const T> sequence, std::size_t n = 2)
{
  if (n == 0)
    {
      throw ConfigError ("n-gram order must be >= 1");
    }
  std::map<std::vector<T>, std::size_t> counts;
  if (sequence.size () < n)
    {
      return counts;
    }
  for (std::size_t i = 0; i + n <= sequence.size (); ++i)
    {
      ++counts[std::vector<T> (sequence.begin () + i, sequence.begin () + i + n)];
    }
  return counts;
}

/// Character n-grams of a string, keyed by the substring.
std::map<std::string, std::size_t> ngram_counts (std::string_view text,
                                                 std::size_t n = 2);

using NGram = std::vector<EventId>;

/// Sorted, duplicate-free set of event n-grams; one column per key.
class NGramVocabulary
{
public:
  NGramVocabulary () = default;
  /// Keys are sorted lexicographically by event code and deduplicated.
  NGramVocabulary (std::vector<NGram> keys, std::size_t order);

  std::size_t size () const { return m_keys.size (); }
  std::size_t order () const { return m_order; }
  const NGram &key (std::size_t column) const { return m_keys.at (column); }
  const std::vector<NGram> &keys () const { return m_keys; }
  std::optional<std::size_t> index_of (const NGram &key) const;
  /// "HO_COMMAND|HO_COMPLETE"
  std::string label (std::size_t column) const;

private:
  std::vector<NGram> m_keys;
  std::size_t m_order = 2;
};

/// Union of the n-grams seen in both sets of sub-calls.
NGramVocabulary build_vocabulary (std::span<const SubCall> train,
                                  std::span<const SubCall> test,
                                  std::size_t order = 2);

struct FeatureMatrix
{
  NGramVocabulary vocabulary;
  /// One row per sub-call, one column per vocabulary key.
  Eigen::MatrixXd counts;
};

/// Throws DataError if a sub-call contains an n-gram outside the vocabulary.
FeatureMatrix build_feature_matrix (std::span<const SubCall> sub_calls,
                                    const NGramVocabulary &vocabulary);

void write_feature_csv (const std::filesystem::path &path,
                        const FeatureMatrix &matrix,
                        std::span<const SubCall> sub_calls);

} // namespace sleepcell
