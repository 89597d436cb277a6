#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "iocost/units.hpp"

namespace iocost {

enum class JoinStrategy { Broadcast, Shuffle, Auto };
std::string_view to_string(JoinStrategy s);
JoinStrategy parse_join_strategy(std::string_view text);

inline constexpr std::int64_t kDefaultBroadcastThreshold = 100 * kMB;

struct JoinSpec {
  std::int64_t build_bytes = 0;
  std::int64_t probe_bytes = 0;
  std::int64_t workers = 1;
  JoinStrategy strategy = JoinStrategy::Auto;
  // Auto picks broadcast when build_bytes <= threshold.
  std::int64_t broadcast_threshold = kDefaultBroadcastThreshold;
};

// Storage I/O of one join. The probe side is read once in either strategy;
// a broadcast reads the build side once per worker.
struct JoinIoPlan {
  JoinStrategy strategy = JoinStrategy::Broadcast;  // never Auto
  std::int64_t storage_bytes = 0;
  std::int64_t storage_requests = 0;
  std::int64_t duplicated_bytes = 0;
  // Informational only, not storage I/O: build + probe for a shuffle.
  std::int64_t shuffle_network_bytes = 0;

  friend bool operator==(const JoinIoPlan&, const JoinIoPlan&) = default;
};

JoinStrategy resolve_strategy(const JoinSpec& spec);
JoinIoPlan plan_join(const JoinSpec& spec, std::int64_t request_bytes);

// Exact 1 - 1/n held as a reduced-free fraction (n - 1) / n.
struct WasteFraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  // Exact comparison against a decimal such as 0.995.
  bool equals(DecimalFactor d) const;
  // Fixed-point text with `places` decimals, e.g. "0.9950".
  std::string to_string(int places = 4) const;
};

WasteFraction waste_fraction(std::int64_t workers);

struct FleetParams {
  std::int64_t queries_per_day = 0;
  DecimalFactor broadcast_fraction;
  std::int64_t workers = 1;
  std::int64_t build_bytes = 0;
};

// workers × build × queries × fraction bytes per day. Exact; throws
// OverflowError.
std::int64_t fleet_aggregate(const FleetParams& params);

// ceil(bytes / request_bytes).
std::int64_t fleet_api_calls(std::int64_t bytes_per_day, std::int64_t request_bytes);

// Daily storage I/O of every broadcast-eligible query in the fleet under
// the given strategy: the plan_join of one query scaled by
// queries × fraction, with the build side taken from fleet_aggregate.
JoinIoPlan fleet_join_io(const FleetParams& params, std::int64_t probe_bytes, JoinStrategy strategy,
                         std::int64_t broadcast_threshold, std::int64_t request_bytes);

nlohmann::json to_json(const JoinIoPlan& plan);

}  // namespace iocost
