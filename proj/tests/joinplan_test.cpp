#include "iocost/joinplan.hpp"

#include <random>

#include <gtest/gtest.h>

#include "iocost/errors.hpp"

namespace iocost {
namespace {

JoinSpec spec(std::int64_t build, std::int64_t probe, std::int64_t workers, JoinStrategy s) {
  return {build, probe, workers, s, kDefaultBroadcastThreshold};
}

TEST(PlanJoin, SingleWorkerBroadcastEqualsShuffle) {
  const auto b = plan_join(spec(300, 700, 1, JoinStrategy::Broadcast), 100);
  const auto s = plan_join(spec(300, 700, 1, JoinStrategy::Shuffle), 100);
  EXPECT_EQ(b.storage_bytes, 1000);
  EXPECT_EQ(b.storage_bytes, s.storage_bytes);
  EXPECT_EQ(b.storage_requests, 10);
  EXPECT_EQ(b.duplicated_bytes, 0);
  EXPECT_EQ(s.shuffle_network_bytes, 1000);
  EXPECT_EQ(b.shuffle_network_bytes, 0);
}

TEST(PlanJoin, TwoHundredWorkers) {
  const auto p = plan_join(spec(100 * kMB, 0, 200, JoinStrategy::Broadcast), 10 * kKB);
  EXPECT_EQ(p.storage_bytes, 20 * kGB);
  EXPECT_EQ(p.duplicated_bytes, 19'900'000'000);
  EXPECT_EQ(p.storage_requests, 2'000'000);
}

TEST(PlanJoin, AutoThresholdIsInclusive) {
  EXPECT_EQ(plan_join(spec(100 * kMB, 0, 8, JoinStrategy::Auto), kMB).strategy, JoinStrategy::Broadcast);
  EXPECT_EQ(plan_join(spec(100 * kMB + 1, 0, 8, JoinStrategy::Auto), kMB).strategy, JoinStrategy::Shuffle);
  JoinSpec tight = spec(10, 0, 8, JoinStrategy::Auto);
  tight.broadcast_threshold = 9;
  EXPECT_EQ(resolve_strategy(tight), JoinStrategy::Shuffle);
}

TEST(PlanJoin, RequestsRoundUp) {
  EXPECT_EQ(plan_join(spec(1, 0, 3, JoinStrategy::Broadcast), 2).storage_requests, 2);
  EXPECT_EQ(plan_join(spec(0, 0, 3, JoinStrategy::Broadcast), 2).storage_requests, 0);
}

TEST(PlanJoin, Validation) {
  EXPECT_THROW(plan_join(spec(1, 1, 0, JoinStrategy::Shuffle), 1), ValidationError);
  EXPECT_THROW(plan_join(spec(-1, 1, 1, JoinStrategy::Shuffle), 1), ValidationError);
  EXPECT_THROW(plan_join(spec(1, 1, 1, JoinStrategy::Shuffle), 0), ValidationError);
  EXPECT_THROW(plan_join(spec(INT64_MAX / 2, 0, 3, JoinStrategy::Broadcast), 1), OverflowError);
  EXPECT_THROW(parse_join_strategy("hash"), ValidationError);
  EXPECT_EQ(parse_join_strategy("auto"), JoinStrategy::Auto);
}

TEST(WasteFraction, Examples) {
  EXPECT_TRUE(waste_fraction(200).equals(DecimalFactor::parse("0.995")));
  EXPECT_EQ(waste_fraction(200).to_string(), "0.9950");
  EXPECT_TRUE(waste_fraction(1).equals(DecimalFactor::parse("0")));
  EXPECT_EQ(waste_fraction(1).to_string(), "0.0000");
  EXPECT_TRUE(waste_fraction(4).equals(DecimalFactor::parse("0.75")));
  EXPECT_FALSE(waste_fraction(3).equals(DecimalFactor::parse("0.666667")));
  EXPECT_EQ(waste_fraction(3).to_string(6), "0.666667");
  EXPECT_THROW(waste_fraction(0), ValidationError);
}

TEST(WasteFraction, StrictlyIncreasingBelowOne) {
  for (std::int64_t n = 1; n < 2000; ++n) {
    const auto a = waste_fraction(n);
    const auto b = waste_fraction(n + 1);
    EXPECT_GE(a.numerator, 0);
    EXPECT_LT(a.numerator, a.denominator);
    // a < b  <=>  a.num * b.den < b.num * a.den
    EXPECT_LT(a.numerator * b.denominator, b.numerator * a.denominator);
  }
}

FleetParams fleet_of(std::int64_t build) { return {500'000, DecimalFactor::parse("0.20"), 200, build}; }

TEST(FleetAggregate, Examples) {
  EXPECT_EQ(fleet_aggregate(fleet_of(100 * kMB)), 2 * kPB);
  EXPECT_EQ(fleet_aggregate(fleet_of(20 * kMB)), 400'000'000'000'000);
  auto none = fleet_of(100 * kMB);
  none.broadcast_fraction = DecimalFactor::parse("0");
  EXPECT_EQ(fleet_aggregate(none), 0);
}

TEST(FleetAggregate, Validation) {
  auto p = fleet_of(100 * kMB);
  p.broadcast_fraction = DecimalFactor::parse("1.5");
  EXPECT_THROW(fleet_aggregate(p), ValidationError);
  p = fleet_of(100 * kMB);
  p.workers = 0;
  EXPECT_THROW(fleet_aggregate(p), ValidationError);
  p = fleet_of(100 * kPB);
  p.queries_per_day = 1'000'000'000;
  EXPECT_THROW(fleet_aggregate(p), OverflowError);
}

TEST(FleetAggregate, LinearInEachParameter) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 500; ++round) {
    const FleetParams base{1 + static_cast<std::int64_t>(rng() % 10'000),
                           DecimalFactor::from_millionths(static_cast<std::int64_t>(rng() % 100'001) * 10), 
                           1 + static_cast<std::int64_t>(rng() % 500),
                           static_cast<std::int64_t>(rng() % (kGB))};
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng() % 5);
    const auto agg = fleet_aggregate(base);
    auto q = base;
    q.queries_per_day *= k;
    auto w = base;
    w.workers *= k;
    auto b = base;
    b.build_bytes *= k;
    // Rounding happens once, on the whole product, so scaling any integer
    // factor scales the exact product; compare against the unrounded oracle.
    const __int128 exact_num =
        static_cast<__int128>(base.queries_per_day) * base.workers * base.build_bytes * base.broadcast_fraction.millionths();
    for (const auto& scaled : {q, w, b}) {
      const __int128 num = exact_num * k;
      const auto want = static_cast<std::int64_t>((num + DecimalFactor::kScale / 2) / DecimalFactor::kScale);
      EXPECT_EQ(fleet_aggregate(scaled), want);
    }
    EXPECT_EQ(agg, static_cast<std::int64_t>((exact_num + DecimalFactor::kScale / 2) / DecimalFactor::kScale));
    // Fraction: exact when the product divides evenly.
    auto f = base;
    f.broadcast_fraction = DecimalFactor::from_millionths(base.broadcast_fraction.millionths() / 2);
    auto f2 = base;
    f2.broadcast_fraction = DecimalFactor::from_millionths((base.broadcast_fraction.millionths() / 2) * 2);
    const __int128 per = static_cast<__int128>(base.queries_per_day) * base.workers * base.build_bytes;
    if (per % DecimalFactor::kScale == 0) EXPECT_EQ(fleet_aggregate(f) * 2, fleet_aggregate(f2));
  }
}

TEST(FleetApiCalls, Examples) {
  EXPECT_EQ(fleet_api_calls(2 * kPB, 10 * kKB), 200'000'000'000);
  EXPECT_GT(fleet_api_calls(2 * kPB, 10 * kKB), 10'000'000'000);
  EXPECT_EQ(fleet_api_calls(2 * kPB, kMB), 2'000'000'000);
  EXPECT_EQ(fleet_api_calls(0, kMB), 0);
  EXPECT_EQ(fleet_api_calls(1, kMB), 1);
  EXPECT_THROW(fleet_api_calls(1, 0), ValidationError);
}

TEST(FleetJoinIo, FleetBroadcastAndShuffle) {
  const auto b = fleet_join_io(fleet_of(100 * kMB), 0, JoinStrategy::Broadcast, kDefaultBroadcastThreshold, 10 * kKB);
  EXPECT_EQ(b.storage_bytes, 2 * kPB);
  EXPECT_EQ(b.storage_requests, 200'000'000'000);
  EXPECT_EQ(b.duplicated_bytes, 2 * kPB / 200 * 199);
  const auto s = fleet_join_io(fleet_of(100 * kMB), 0, JoinStrategy::Shuffle, kDefaultBroadcastThreshold, 10 * kKB);
  EXPECT_EQ(s.storage_bytes, 10 * kTB);
  EXPECT_EQ(s.duplicated_bytes, 0);
  EXPECT_EQ(s.shuffle_network_bytes, 10 * kTB);
  EXPECT_EQ(fleet_join_io(fleet_of(100 * kMB), 0, JoinStrategy::Auto, kDefaultBroadcastThreshold, 10 * kKB), b);
}

TEST(JoinProperty, DominanceAndDuplicationIdentity) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 2000; ++round) {
    const auto build = static_cast<std::int64_t>(rng() % (10 * kGB));
    const auto probe = static_cast<std::int64_t>(rng() % (10 * kGB));
    const auto n = 1 + static_cast<std::int64_t>(rng() % 1000);
    const auto req = 1 + static_cast<std::int64_t>(rng() % kMB);
    const auto b = plan_join(spec(build, probe, n, JoinStrategy::Broadcast), req);
    const auto s = plan_join(spec(build, probe, n, JoinStrategy::Shuffle), req);
    EXPECT_GE(b.storage_bytes, s.storage_bytes);
    if (build > 0) EXPECT_EQ(b.storage_bytes == s.storage_bytes, n == 1);
    EXPECT_EQ(b.duplicated_bytes, (n - 1) * build);
    EXPECT_EQ(b.storage_requests, (b.storage_bytes + req - 1) / req);

    JoinSpec a = spec(build, probe, n, JoinStrategy::Auto);
    a.broadcast_threshold = static_cast<std::int64_t>(rng() % (10 * kGB));
    const auto expected = build <= a.broadcast_threshold ? JoinStrategy::Broadcast : JoinStrategy::Shuffle;
    EXPECT_EQ(plan_join(a, req).strategy, expected);
    EXPECT_EQ(plan_join(a, req), expected == JoinStrategy::Broadcast ? b : s);
  }
}

TEST(JoinJson, FieldNames) {
  const auto j = to_json(plan_join(spec(10, 5, 2, JoinStrategy::Shuffle), 4));
  EXPECT_EQ(j.at("strategy"), "shuffle");
  EXPECT_EQ(j.at("storage_bytes"), 15);
  EXPECT_EQ(j.at("storage_requests"), 4);
  EXPECT_EQ(j.at("duplicated_bytes"), 0);
  EXPECT_EQ(j.at("shuffle_network_bytes"), 15);
}

}  // namespace
}  // namespace iocost
