#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iocost/pricing.hpp"
#include "iocost/trace.hpp"

namespace iocost {

enum class EvictionPolicy { Lru };

// How missing blocks of one request are fetched from origin.
enum class FetchMode {
  // One ranged GET from the first to the last missing block; resident
  // blocks in between are re-fetched. At most one origin GET per request.
  Span,
  // One ranged GET per contiguous run of missing blocks.
  PerRun,
};

std::string_view to_string(FetchMode m);
FetchMode parse_fetch_mode(std::string_view text);

class CacheConfig {
 public:
  // Capacity is rounded down to a whole number of blocks.
  CacheConfig(std::int64_t capacity_bytes, std::int64_t block_bytes, FetchMode fetch = FetchMode::Span,
              EvictionPolicy policy = EvictionPolicy::Lru);

  std::int64_t requested_capacity_bytes() const { return requested_capacity_; }
  std::int64_t capacity_bytes() const { return capacity_blocks_ * block_bytes_; }
  std::int64_t capacity_blocks() const { return capacity_blocks_; }
  std::int64_t block_bytes() const { return block_bytes_; }
  bool rounded_down() const { return capacity_bytes() != requested_capacity_; }
  FetchMode fetch() const { return fetch_; }
  EvictionPolicy policy() const { return policy_; }

  CacheConfig with_capacity(std::int64_t capacity_bytes) const {
    return CacheConfig(capacity_bytes, block_bytes_, fetch_, policy_);
  }

 private:
  std::int64_t requested_capacity_;
  std::int64_t capacity_blocks_;
  std::int64_t block_bytes_;
  FetchMode fetch_;
  EvictionPolicy policy_;
};

struct CacheReport {
  std::int64_t requests = 0;  // get records served
  std::int64_t hits = 0;      // block touches found resident
  std::int64_t misses = 0;
  std::int64_t origin_requests = 0;
  std::int64_t origin_bytes = 0;
  std::int64_t requested_bytes = 0;
  double read_amplification = 0.0;  // origin / requested bytes
  double hit_ratio = 0.0;           // hits / (hits + misses)

  RequestTally origin_tally() const;
};

// Replays the get records of `trace` through a block cache. Puts and
// other kinds are ignored.
CacheReport simulate(const Trace& trace, const CacheConfig& config);

struct MissRatioPoint {
  std::int64_t capacity_bytes = 0;
  double hit_ratio = 0.0;
  std::int64_t hits = 0;
  std::int64_t misses = 0;
};

// One simulation per capacity; capacities must be ascending.
std::vector<MissRatioPoint> miss_ratio_curve(const Trace& trace, const CacheConfig& config_template,
                                             std::span<const std::int64_t> capacities);

Money price_origin(const CacheReport& report, const PriceBook& book);

// Origin traffic with no cache layer: every get goes to origin as-is.
RequestTally no_cache_tally(const Trace& trace);

nlohmann::json to_json(const CacheReport& report);

}  // namespace iocost
