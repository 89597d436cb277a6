#include "iocost/cachesim.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "iocost/errors.hpp"

namespace iocost {
namespace {

constexpr std::int64_t kBlock = kMB;

AccessRecord get(std::int64_t ts, std::string obj, std::int64_t off, std::int64_t len) {
  return {ts, std::move(obj), off, len, RequestKind::Get};
}

// Random trace with arbitrary offsets over a handful of objects, so
// requests straddle blocks and resident blocks get sandwiched by misses.
Trace random_trace(std::uint64_t seed, int records = 400) {
  std::mt19937_64 rng(seed);
  std::vector<AccessRecord> out;
  for (int i = 0; i < records; ++i) {
    const auto off = static_cast<std::int64_t>(rng() % (20 * kBlock));
    const auto len = 1 + static_cast<std::int64_t>(rng() % (4 * kBlock));
    out.push_back(get(i, "o" + std::to_string(rng() % 4), off, len));
    if (rng() % 10 == 0) out.push_back({i, "o0", 0, 10, RequestKind::Put});
  }
  return Trace(std::move(out));
}

// Naive LRU: recency vector, most recent at the back, linear search.
struct OracleResult {
  std::vector<bool> hit_sequence;
  std::int64_t origin_requests = 0;
  std::int64_t origin_bytes = 0;
};

OracleResult lru_oracle(const Trace& trace, std::int64_t capacity_blocks, FetchMode fetch) {
  std::vector<std::pair<std::string, std::int64_t>> recency;
  OracleResult out;
  for (const auto& r : trace.records()) {
    if (r.kind != RequestKind::Get) continue;
    std::vector<std::int64_t> missing;
    for (std::int64_t b = r.offset / kBlock; b <= (r.offset + r.length - 1) / kBlock; ++b) {
      const bool hit = std::find(recency.begin(), recency.end(), std::make_pair(r.object, b)) != recency.end();
      out.hit_sequence.push_back(hit);
      if (!hit) missing.push_back(b);
    }
    if (!missing.empty()) {
      if (fetch == FetchMode::Span) {
        out.origin_requests += 1;
        out.origin_bytes += (missing.back() - missing.front() + 1) * kBlock;
      } else {
        for (std::size_t i = 0; i < missing.size(); ++i) {
          if (i == 0 || missing[i] != missing[i - 1] + 1) out.origin_requests += 1;
        }
        out.origin_bytes += static_cast<std::int64_t>(missing.size()) * kBlock;
      }
    }
    for (std::int64_t b = r.offset / kBlock; b <= (r.offset + r.length - 1) / kBlock; ++b) {
      const auto key = std::make_pair(r.object, b);
      recency.erase(std::remove(recency.begin(), recency.end(), key), recency.end());
      recency.push_back(key);
    }
    while (static_cast<std::int64_t>(recency.size()) > capacity_blocks) recency.erase(recency.begin());
  }
  return out;
}

std::int64_t distinct_blocks(const Trace& trace) {
  std::set<std::pair<std::string, std::int64_t>> seen;
  for (const auto& r : trace.records()) {
    if (r.kind != RequestKind::Get) continue;
    for (std::int64_t b = r.offset / kBlock; b <= (r.offset + r.length - 1) / kBlock; ++b) seen.emplace(r.object, b);
  }
  return static_cast<std::int64_t>(seen.size());
}

std::int64_t get_count(const Trace& trace) {
  return std::count_if(trace.records().begin(), trace.records().end(),
                       [](const AccessRecord& r) { return r.kind == RequestKind::Get; });
}

TEST(CacheConfig, RoundsCapacityDown) {
  const CacheConfig c(2500, 1000);
  EXPECT_EQ(c.capacity_blocks(), 2);
  EXPECT_EQ(c.capacity_bytes(), 2000);
  EXPECT_EQ(c.requested_capacity_bytes(), 2500);
  EXPECT_TRUE(c.rounded_down());
  EXPECT_FALSE(CacheConfig(3000, 1000).rounded_down());
  EXPECT_EQ(CacheConfig(0, 1000).capacity_blocks(), 0);
  EXPECT_THROW(CacheConfig(1000, 0), ValidationError);
  EXPECT_THROW(CacheConfig(-1, 1000), ValidationError);
  EXPECT_EQ(parse_fetch_mode("per-run"), FetchMode::PerRun);
  EXPECT_THROW(parse_fetch_mode("lazy"), ValidationError);
}

TEST(Simulate, TwoIdenticalReads) {
  const Trace t({get(0, "a", 0, kKB), get(1, "a", 0, kKB)});
  const auto r = simulate(t, CacheConfig(kBlock, kBlock));
  EXPECT_EQ(r.requests, 2);
  EXPECT_EQ(r.misses, 1);
  EXPECT_EQ(r.hits, 1);
  EXPECT_EQ(r.origin_requests, 1);
  EXPECT_EQ(r.origin_bytes, kBlock);
  EXPECT_DOUBLE_EQ(r.hit_ratio, 0.5);
}

TEST(Simulate, ColdReadAmplification) {
  const auto r = simulate(Trace({get(0, "a", 0, kKB)}), CacheConfig(0, kBlock));
  EXPECT_EQ(r.origin_bytes, kBlock);
  EXPECT_EQ(r.requested_bytes, kKB);
  EXPECT_DOUBLE_EQ(r.read_amplification, 1000.0);
  EXPECT_DOUBLE_EQ(r.hit_ratio, 0.0);
}

TEST(Simulate, HandExecutedLruTable) {
  // Blocks X=0, Y=1, Z=2 of one object, capacity two blocks.
  //   access   X  Y  X  Z  Y  X  Z  Z
  //   result   M  M  H  M  M  M  M  H
  //   MRU..LRU X  YX XY ZX YZ XY ZX ZX
  const std::vector<std::int64_t> order{0, 1, 0, 2, 1, 0, 2, 2};
  std::vector<AccessRecord> recs;
  for (std::size_t i = 0; i < order.size(); ++i) recs.push_back(get(static_cast<std::int64_t>(i), "t", order[i] * kBlock, 1));
  const Trace t(recs);
  const auto r = simulate(t, CacheConfig(2 * kBlock, kBlock));
  EXPECT_EQ(r.hits, 2);
  EXPECT_EQ(r.misses, 6);
  EXPECT_EQ(r.origin_requests, 6);
  const std::vector<bool> expected{false, false, true, false, false, false, false, true};
  EXPECT_EQ(lru_oracle(t, 2, FetchMode::Span).hit_sequence, expected);
}

TEST(Simulate, PutsAreIgnored) {
  const Trace t({get(0, "a", 0, 10), {1, "a", 0, 10, RequestKind::Put}, get(2, "a", 0, 10)});
  const auto r = simulate(t, CacheConfig(kBlock, kBlock));
  EXPECT_EQ(r.requests, 2);
  EXPECT_EQ(r.hits, 1);
}

TEST(Simulate, FetchModesOnSandwichedBlock) {
  // Block 1 resident, then blocks 0..2 requested: two missing runs.
  const Trace t({get(0, "a", kBlock, 1), get(1, "a", 0, 3 * kBlock)});
  const auto span = simulate(t, CacheConfig(10 * kBlock, kBlock, FetchMode::Span));
  EXPECT_EQ(span.origin_requests, 2);
  EXPECT_EQ(span.origin_bytes, 4 * kBlock);
  const auto runs = simulate(t, CacheConfig(10 * kBlock, kBlock, FetchMode::PerRun));
  EXPECT_EQ(runs.origin_requests, 3);
  EXPECT_EQ(runs.origin_bytes, 3 * kBlock);
  // Without a cache the same trace costs two GETs.
  EXPECT_EQ(no_cache_tally(t).total_requests(), 2);
  EXPECT_EQ(span.hits, runs.hits);
}

TEST(Simulate, MatchesNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto t = random_trace(seed, 150);
    for (auto fetch : {FetchMode::Span, FetchMode::PerRun}) {
      for (std::int64_t cap : {0, 1, 3, 8, 1000}) {
        const auto r = simulate(t, CacheConfig(cap * kBlock, kBlock, fetch));
        const auto o = lru_oracle(t, cap, fetch);
        const auto hits = std::count(o.hit_sequence.begin(), o.hit_sequence.end(), true);
        EXPECT_EQ(r.hits, hits);
        EXPECT_EQ(r.misses, static_cast<std::int64_t>(o.hit_sequence.size()) - hits);
        EXPECT_EQ(r.origin_requests, o.origin_requests);
        EXPECT_EQ(r.origin_bytes, o.origin_bytes);
      }
    }
  }
}

TEST(Simulate, EmptyTraceRejected) {
  EXPECT_THROW(simulate(Trace{}, CacheConfig(0, kBlock)), ValidationError);
}

TEST(CacheProperty, StackPropertyOverSeededTraces) {
  const std::vector<std::int64_t> caps{0, 2 * kBlock, 8 * kBlock, 32 * kBlock, 128 * kBlock};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto t = random_trace(seed);
    const auto curve = miss_ratio_curve(t, CacheConfig(0, kBlock), caps);
    ASSERT_EQ(curve.size(), caps.size());
    EXPECT_EQ(curve[0].hits, 0);
    EXPECT_DOUBLE_EQ(curve[0].hit_ratio, 0.0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_LE(curve[i - 1].hits, curve[i].hits);
      EXPECT_LE(curve[i - 1].hit_ratio, curve[i].hit_ratio);
    }
  }
}

TEST(CacheProperty, InfiniteCapacityFetchesEachBlockOnce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto t = random_trace(seed);
    const auto distinct = distinct_blocks(t);
    const auto r = simulate(t, CacheConfig(distinct * kBlock, kBlock, FetchMode::PerRun));
    EXPECT_EQ(r.misses, distinct);
    EXPECT_EQ(r.origin_bytes, distinct * kBlock);
    // Span mode still misses each block once but may re-transfer a
    // resident block that sits between two misses.
    const auto s = simulate(t, CacheConfig(distinct * kBlock, kBlock, FetchMode::Span));
    EXPECT_EQ(s.misses, distinct);
    EXPECT_GE(s.origin_bytes, distinct * kBlock);
  }
}

TEST(CacheProperty, SpanNeverExceedsNoCacheRequests) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto t = random_trace(seed);
    for (std::int64_t cap : {0, 4, 64}) {
      const auto r = simulate(t, CacheConfig(cap * kBlock, kBlock));
      EXPECT_LE(r.origin_requests, no_cache_tally(t).total_requests());
      EXPECT_LE(r.origin_requests, r.misses);
      EXPECT_EQ(r.origin_bytes % kBlock, 0);
      EXPECT_GE(r.hit_ratio, 0.0);
      EXPECT_LE(r.hit_ratio, 1.0);
    }
    const auto runs = simulate(t, CacheConfig(4 * kBlock, kBlock, FetchMode::PerRun));
    EXPECT_LE(runs.origin_requests, runs.misses);
  }
}

TEST(CacheProperty, ColdUniqueTraceAmplificationIsExact) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 50; ++round) {
    std::vector<AccessRecord> recs;
    std::int64_t covered = 0;
    std::int64_t requested = 0;
    for (int i = 0; i < 30; ++i) {
      const auto off = static_cast<std::int64_t>(rng() % (5 * kBlock));
      const auto len = 1 + static_cast<std::int64_t>(rng() % (3 * kBlock));
      recs.push_back(get(i, "u" + std::to_string(i), off, len));
      covered += ((off + len - 1) / kBlock - off / kBlock + 1) * kBlock;
      requested += len;
    }
    const Trace t(recs);
    for (auto fetch : {FetchMode::Span, FetchMode::PerRun}) {
      const auto r = simulate(t, CacheConfig(kBlock, kBlock, fetch));
      EXPECT_EQ(r.origin_bytes, covered);
      EXPECT_EQ(r.origin_requests, 30);
      EXPECT_DOUBLE_EQ(r.read_amplification, static_cast<double>(covered) / static_cast<double>(requested));
    }
  }
}

TEST(CacheProperty, Deterministic) {
  const auto t = random_trace(4);
  EXPECT_EQ(to_json(simulate(t, CacheConfig(5 * kBlock, kBlock))), to_json(simulate(t, CacheConfig(5 * kBlock, kBlock))));
}

TEST(MissRatioCurve, Validation) {
  const auto t = random_trace(1, 10);
  const std::vector<std::int64_t> bad{2 * kBlock, kBlock};
  EXPECT_THROW(miss_ratio_curve(t, CacheConfig(0, kBlock), bad), ValidationError);
}

TEST(PriceOrigin, Examples) {
  CacheReport r;
  r.origin_requests = 1000;
  r.origin_bytes = 1000 * kBlock;
  EXPECT_EQ(price_origin(r, find_pricebook("s3-standard")).nano_usd, 400'000);
  EXPECT_EQ(format_usd(price_origin(r, find_pricebook("s3-standard"))), "0.0004");
  EXPECT_EQ(price_origin(CacheReport{}, find_pricebook("s3-standard")).nano_usd, 0);

  const Trace t({get(0, "a", 0, kKB), get(1, "a", 0, kKB)});
  EXPECT_EQ(price_origin(simulate(t, CacheConfig(kBlock, kBlock)), find_pricebook("azure-gpv2-hot")).nano_usd, 500);
}

TEST(CacheJson, FieldNames) {
  const auto j = to_json(simulate(Trace({get(0, "a", 0, kKB)}), CacheConfig(0, kBlock)));
  for (const char* k : {"requests", "hits", "misses", "origin_requests", "origin_bytes", "requested_bytes",
                        "read_amplification", "hit_ratio"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j.size(), 8u);
}

}  // namespace
}  // namespace iocost
