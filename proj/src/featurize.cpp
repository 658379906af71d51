#include "sleepcell/featurize.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace sleepcell {

std::vector<EventId>
SubCall::events () const
{
  std::vector<EventId> out;
  out.reserve (records.size ());
  for (const auto &r : records)
    {
      out.push_back (r.event);
    }
  return out;
}

std::vector<WindowSpan>
window_spans (std::size_t length, std::size_t m, std::size_t n)
{
  if (m < 2)
    {
      throw ConfigError ("window size must be >= 2");
    }
  if (n < 1 || n > m)
    {
      throw ConfigError ("window step must be in [1, window size]");
    }
  std::vector<WindowSpan> spans;
  for (std::size_t offset = 0; offset < length; offset += n)
    {
      const std::size_t len = std::min (m, length - offset);
      if (len >= 2)
        {
          spans.push_back (WindowSpan{offset, len});
        }
    }
  return spans;
}

std::vector<SubCall>
sliding_window (const Call &call, std::size_t call_index, std::size_t m,
                std::size_t n)
{
  std::vector<SubCall> out;
  for (const auto &span : window_spans (call.records.size (), m, n))
    {
      SubCall s;
      s.ue = call.ue;
      s.call_index = call_index;
      s.offset = span.offset;
      s.records.assign (call.records.begin () + span.offset,
                        call.records.begin () + span.offset + span.length);
      out.push_back (std::move (s));
    }
  return out;
}

std::vector<SubCall>
sliding_window (std::span<const Call> calls, std::size_t m, std::size_t n)
{
  std::vector<SubCall> out;
  for (std::size_t i = 0; i < calls.size (); ++i)
    {
      auto part = sliding_window (calls[i], i, m, n);
      out.insert (out.end (), std::make_move_iterator (part.begin ()),
                  std::make_move_iterator (part.end ()));
    }
  return out;
}

std::map<std::string, std::size_t>
ngram_counts (std::string_view text, std::size_t n)
{
  std::map<std::string, std::size_t> out;
  const auto counts = ngram_counts (std::span<const char> (text.data (), text.size ()), n);
  for (const auto &[key, count] : counts)
    {
      out.emplace (std::string (key.begin (), key.end ()), count);
    }
  return out;
}

NGramVocabulary::NGramVocabulary (std::vector<NGram> keys, std::size_t order)
  : m_keys (std::move (keys)), m_order (order)
{
  if (order == 0)
    {
      throw ConfigError ("n-gram order must be >= 1");
    }
  for (const auto &k : m_keys)
    {
      if (k.size () != order)
        {
          throw DataError ("vocabulary key length does not match the order");
        }
    }
  std::sort (m_keys.begin (), m_keys.end ());
  m_keys.erase (std::unique (m_keys.begin (), m_keys.end ()), m_keys.end ());
}

std::optional<std::size_t>
NGramVocabulary::index_of (const NGram &key) const
{
  auto it = std::lower_bound (m_keys.begin (), m_keys.end (), key);
  if (it == m_keys.end () || *it != key)
    {
      return std::nullopt;
    }
  return static_cast<std::size_t> (it - m_keys.begin ());
}

std::string
NGramVocabulary::label (std::size_t column) const
{
  std::string out;
  for (const auto e : key (column))
    {
      if (!out.empty ())
        {
          out += '|';
        }
      out += event_token (e);
    }
  return out;
}

NGramVocabulary
build_vocabulary (std::span<const SubCall> train, std::span<const SubCall> test,
                  std::size_t order)
{
  std::set<NGram> seen;
  for (const auto side : {train, test})
    {
      for (const auto &s : side)
        {
          const auto events = s.events ();
          for (const auto &[key, count] : ngram_counts (std::span<const EventId> (events), order))
            {
              seen.insert (key);
            }
        }
    }
  return NGramVocabulary (std::vector<NGram> (seen.begin (), seen.end ()), order);
}

FeatureMatrix
build_feature_matrix (std::span<const SubCall> sub_calls,
                      const NGramVocabulary &vocabulary)
{
  FeatureMatrix fm;
  fm.vocabulary = vocabulary;
  fm.counts = Eigen::MatrixXd::Zero (static_cast<Eigen::Index> (sub_calls.size ()),
                                     static_cast<Eigen::Index> (vocabulary.size ()));
  for (std::size_t i = 0; i < sub_calls.size (); ++i)
    {
      const auto events = sub_calls[i].events ();
      const auto counts = ngram_counts (std::span<const EventId> (events), vocabulary.order ());
      for (const auto &[key, count] : counts)
        {
          const auto col = vocabulary.index_of (key);
          if (!col)
            {
              throw DataError ("sub-call contains an n-gram outside the vocabulary");
            }
          fm.counts (static_cast<Eigen::Index> (i), static_cast<Eigen::Index> (*col))
            = static_cast<double> (count);
        }
    }
  return fm;
}

void
write_feature_csv (const std::filesystem::path &path, const FeatureMatrix &matrix,
                   std::span<const SubCall> sub_calls)
{
  if (static_cast<std::size_t> (matrix.counts.rows ()) != sub_calls.size ())
    {
      throw DataError ("feature matrix rows do not match the sub-calls");
    }
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out << "ue,call_index,offset";
  for (std::size_t c = 0; c < matrix.vocabulary.size (); ++c)
    {
      out << ',' << matrix.vocabulary.label (c);
    }
  out << '\n';
  for (std::size_t i = 0; i < sub_calls.size (); ++i)
    {
      out << sub_calls[i].ue << ',' << sub_calls[i].call_index << ','
          << sub_calls[i].offset;
      for (Eigen::Index c = 0; c < matrix.counts.cols (); ++c)
        {
          out << ',' << static_cast<long long> (matrix.counts (static_cast<Eigen::Index> (i), c));
        }
      out << '\n';
    }
}

} // namespace sleepcell
