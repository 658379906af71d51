#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sleepcell/featurize.hpp"

using namespace sleepcell;

namespace {

/// Independent windowing oracle: walk every event position and group by
/// window start, then drop short windows.
std::vector<std::size_t>
oracle_lengths (std::size_t len, std::size_t m, std::size_t n)
{
  std::vector<std::size_t> out;
  for (std::size_t start = 0; start < len; start += n)
    {
      std::size_t count = 0;
      for (std::size_t i = start; i < len && i < start + m; ++i)
        {
          ++count;
        }
      if (count >= 2)
        {
          out.push_back (count);
        }
    }
  return out;
}

std::vector<std::size_t>
lengths_of (const std::vector<WindowSpan> &spans)
{
  std::vector<std::size_t> out;
  for (const auto &s : spans)
    {
      out.push_back (s.length);
    }
  return out;
}

Call
call_of (UeId ue, const std::vector<EventId> &events)
{
  Call c;
  c.ue = ue;
  for (std::size_t i = 0; i < events.size (); ++i)
    {
      MdtRecord r;
      r.ue = ue;
      r.t = static_cast<std::int64_t> (i);
      r.event = events[i];
      if (requires_target (r.event))
        {
          r.target = 2;
        }
      c.records.push_back (r);
    }
  return c;
}

std::vector<EventId>
random_events (std::mt19937_64 &rng, std::size_t n)
{
  std::uniform_int_distribution<int> pick (0, 8);
  std::vector<EventId> out;
  for (std::size_t i = 0; i < n; ++i)
    {
      out.push_back (kAllEvents[static_cast<std::size_t> (pick (rng))]);
    }
  return out;
}

} // namespace

TEST_CASE ("window lengths")
{
  CHECK (lengths_of (window_spans (23, 15, 10)) == std::vector<std::size_t>{15, 13, 3});
  CHECK (lengths_of (window_spans (21, 15, 10)) == std::vector<std::size_t>{15, 11});
  // The offset rule gives a second window of 5 events for a 15-event call.
  CHECK (lengths_of (window_spans (15, 15, 10)) == std::vector<std::size_t>{15, 5});
  CHECK (window_spans (1, 15, 10).empty ());
  CHECK (window_spans (0, 15, 10).empty ());
  CHECK (lengths_of (window_spans (2, 15, 10)) == std::vector<std::size_t>{2});

  const auto spans = window_spans (23, 15, 10);
  CHECK (spans[1] == WindowSpan{10, 13});
  CHECK (spans[2] == WindowSpan{20, 3});
}

TEST_CASE ("windowing matches the oracle")
{
  for (std::size_t m = 2; m <= 16; ++m)
    {
      for (std::size_t n = 1; n <= m; ++n)
        {
          for (std::size_t len = 0; len <= 60; ++len)
            {
              const auto spans = window_spans (len, m, n);
              REQUIRE (lengths_of (spans) == oracle_lengths (len, m, n));
              std::vector<int> covered (len, 0);
              for (const auto &s : spans)
                {
                  REQUIRE (s.offset + s.length <= len);
                  for (std::size_t i = s.offset; i < s.offset + s.length; ++i)
                    {
                      covered[i] = 1;
                    }
                }
              if (len >= 2 && n <= m - 1)
                {
                  CHECK (std::count (covered.begin (), covered.end (), 0) == 0);
                }
            }
        }
    }
}

TEST_CASE ("window parameter checks")
{
  CHECK_THROWS_AS (window_spans (10, 1, 1), ConfigError);
  CHECK_THROWS_AS (window_spans (10, 15, 0), ConfigError);
  CHECK_THROWS_AS (window_spans (10, 5, 6), ConfigError);
}

TEST_CASE ("sliding window keeps its parent slice")
{
  std::mt19937_64 rng (4);
  const auto call = call_of (7, random_events (rng, 23));
  const auto subs = sliding_window (call, 3);
  REQUIRE (subs.size () == 3);
  for (const auto &s : subs)
    {
      CHECK (s.ue == 7);
      CHECK (s.call_index == 3);
      for (std::size_t i = 0; i < s.records.size (); ++i)
        {
          CHECK (s.records[i] == call.records[s.offset + i]);
        }
    }
  std::vector<Call> calls{call_of (1, {EventId::Rlf}), call};
  const auto all = sliding_window (std::span<const Call> (calls));
  REQUIRE (all.size () == 3);
  CHECK (all.front ().call_index == 1);
}

TEST_CASE ("character bigrams of performance and performer")
{
  const auto a = ngram_counts ("performance", 2);
  const std::map<std::string, std::size_t> expect_a{
    {"pe", 1}, {"er", 1}, {"rf", 1}, {"fo", 1}, {"or", 1},
    {"rm", 1}, {"ma", 1}, {"an", 1}, {"nc", 1}, {"ce", 1}};
  CHECK (a == expect_a);
  CHECK (a.count ("me") == 0);

  const auto b = ngram_counts ("performer", 2);
  CHECK (b.at ("er") == 2);
  CHECK (b.at ("me") == 1);
  for (const char *absent : {"ma", "an", "nc", "ce"})
    {
      CHECK (b.count (absent) == 0);
    }
  std::size_t total = 0;
  for (const auto &[k, v] : b)
    {
      total += v;
    }
  CHECK (total == 8);

  CHECK (ngram_counts ("p", 2).empty ());
  CHECK (ngram_counts ("", 2).empty ());
  CHECK_THROWS_AS (ngram_counts ("abc", 0), ConfigError);
  CHECK (ngram_counts ("aaa", 1).at ("a") == 3);
}

TEST_CASE ("event bigrams total len - 1")
{
  std::mt19937_64 rng (9);
  for (std::size_t len = 0; len < 30; ++len)
    {
      const auto seq = random_events (rng, len);
      std::size_t total = 0;
      for (const auto &[k, v] : ngram_counts (std::span<const EventId> (seq), 2))
        {
          total += v;
        }
      CHECK (total == (len < 2 ? 0 : len - 1));
    }
}

TEST_CASE ("vocabulary is the sorted union")
{
  const auto a = EventId::A3Rsrp;
  const auto b = EventId::HoCommand;
  const auto c = EventId::HoComplete;
  SubCall train;
  train.records = call_of (1, {a, b}).records;
  SubCall test;
  test.records = call_of (2, {b, c}).records;
  const std::vector<SubCall> tr{train};
  const std::vector<SubCall> te{test};
  const auto vocab = build_vocabulary (tr, te);
  REQUIRE (vocab.size () == 2);
  CHECK (vocab.key (0) == NGram{a, b});
  CHECK (vocab.key (1) == NGram{b, c});
  CHECK (vocab.label (1) == "HO_COMMAND|HO_COMPLETE");
  CHECK (vocab.index_of (NGram{c, a}) == std::nullopt);

  NGramVocabulary dup ({NGram{c, a}, NGram{a, b}, NGram{c, a}}, 2);
  CHECK (dup.size () == 2);
  CHECK (dup.key (0) == NGram{a, b});
}

TEST_CASE ("feature rows")
{
  SubCall s;
  s.records
    = call_of (1, {EventId::HoCommand, EventId::HoComplete, EventId::A2RsrpEnter}).records;
  const std::vector<SubCall> rows{s};
  const auto vocab = build_vocabulary (rows, {});
  const auto fm = build_feature_matrix (rows, vocab);
  REQUIRE (fm.counts.rows () == 1);
  REQUIRE (fm.counts.cols () == 2);
  CHECK (fm.counts (0, *vocab.index_of ({EventId::HoCommand, EventId::HoComplete})) == 1.0);
  CHECK (fm.counts (0, *vocab.index_of ({EventId::HoComplete, EventId::A2RsrpEnter})) == 1.0);
  CHECK (fm.counts.row (0).sum () == 2.0);

  SubCall other;
  other.records = call_of (2, {EventId::Rlf, EventId::RlfReestab}).records;
  CHECK_THROWS_AS (build_feature_matrix (std::vector<SubCall>{other}, vocab), DataError);
}

TEST_CASE ("row sums equal sub-call length minus one")
{
  std::mt19937_64 rng (17);
  std::vector<Call> calls;
  for (UeId ue = 0; ue < 20; ++ue)
    {
      calls.push_back (call_of (ue, random_events (rng, 5 + static_cast<std::size_t> (ue) * 3)));
    }
  const auto subs = sliding_window (std::span<const Call> (calls));
  const auto fm = build_feature_matrix (subs, build_vocabulary (subs, {}));
  for (std::size_t i = 0; i < subs.size (); ++i)
    {
      CHECK (fm.counts.row (static_cast<Eigen::Index> (i)).sum ()
             == static_cast<double> (subs[i].records.size () - 1));
      CHECK (fm.counts.row (static_cast<Eigen::Index> (i)).minCoeff () >= 0.0);
    }
}

TEST_CASE ("reversal changes the features")
{
  const std::vector<EventId> fwd{EventId::A3Rsrp, EventId::HoCommand, EventId::HoComplete};
  const std::vector<EventId> rev (fwd.rbegin (), fwd.rend ());
  SubCall a;
  a.records = call_of (1, fwd).records;
  SubCall b;
  b.records = call_of (1, rev).records;
  const std::vector<SubCall> rows{a, b};
  const auto fm = build_feature_matrix (rows, build_vocabulary (rows, {}));
  CHECK (fm.counts.row (0) != fm.counts.row (1));
}

TEST_CASE ("feature csv")
{
  testing::TempDir dir;
  SubCall s;
  s.ue = 4;
  s.call_index = 1;
  s.offset = 10;
  s.records = call_of (4, {EventId::HoCommand, EventId::HoComplete}).records;
  const std::vector<SubCall> rows{s};
  write_feature_csv (dir / "f.csv", build_feature_matrix (rows, build_vocabulary (rows, {})),
                     rows);
  CHECK (testing::slurp (dir / "f.csv") == "ue,call_index,offset,HO_COMMAND|HO_COMPLETE\n4,1,10,1\n");
}
