#include "iocost/cachesim.hpp"

#include <list>
#include <string>
#include <unordered_map>

#include "iocost/errors.hpp"

namespace iocost {
namespace {

struct BlockId {
  std::uint32_t object = 0;
  std::int64_t block = 0;
  bool operator==(const BlockId&) const = default;
};

struct BlockIdHash {
  std::size_t operator()(const BlockId& b) const {
    return std::hash<std::int64_t>{}(b.block) ^ (static_cast<std::size_t>(b.object) * 0x9E3779B97F4A7C15ull);
  }
};

// Recency list, most recent at the front.
class LruBlocks {
 public:
  explicit LruBlocks(std::int64_t capacity) : capacity_(capacity) {}

  bool contains(const BlockId& b) const { return index_.count(b) != 0; }

  void touch(const BlockId& b) {
    auto it = index_.find(b);
    if (it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.push_front(b);
    index_.emplace(b, order_.begin());
  }

  void evict_to_capacity() {
    while (static_cast<std::int64_t>(order_.size()) > capacity_) {
      index_.erase(order_.back());
      order_.pop_back();
    }
  }

 private:
  std::int64_t capacity_;
  std::list<BlockId> order_;
  std::unordered_map<BlockId, std::list<BlockId>::iterator, BlockIdHash> index_;
};

}  // namespace

std::string_view to_string(FetchMode m) { return m == FetchMode::Span ? "span" : "per-run"; }

FetchMode parse_fetch_mode(std::string_view text) {
  if (text == "span") return FetchMode::Span;
  if (text == "per-run") return FetchMode::PerRun;
  throw ValidationError("unknown fetch mode '" + std::string(text) + "'");
}

CacheConfig::CacheConfig(std::int64_t capacity_bytes, std::int64_t block_bytes, FetchMode fetch,
                         EvictionPolicy policy)
    : requested_capacity_(capacity_bytes), capacity_blocks_(0), block_bytes_(block_bytes), fetch_(fetch),
      policy_(policy) {
  if (block_bytes <= 0) throw ValidationError("cache block bytes must be > 0");
  if (capacity_bytes < 0) throw ValidationError("cache capacity must be >= 0");
  capacity_blocks_ = capacity_bytes / block_bytes;
}

RequestTally CacheReport::origin_tally() const {
  RequestTally t;
  t.add(RequestKind::Get, origin_requests, origin_bytes);
  return t;
}

CacheReport simulate(const Trace& trace, const CacheConfig& config) {
  if (trace.empty()) throw ValidationError("cannot simulate an empty trace");
  const std::int64_t block = config.block_bytes();
  LruBlocks cache(config.capacity_blocks());
  std::unordered_map<std::string, std::uint32_t> object_ids;
  std::vector<bool> missing;

  CacheReport report;
  for (const auto& r : trace.records()) {
    if (r.kind != RequestKind::Get) continue;
    const auto object = object_ids.try_emplace(r.object, static_cast<std::uint32_t>(object_ids.size())).first->second;
    const std::int64_t first = r.offset / block;
    const std::int64_t last = (r.offset + r.length - 1) / block;

    ++report.requests;
    report.requested_bytes = checked_add(report.requested_bytes, r.length, "requested bytes");

    // Residency is judged against the state before this request.
    missing.assign(static_cast<std::size_t>(last - first + 1), false);
    std::int64_t first_miss = -1;
    std::int64_t last_miss = -1;
    for (std::int64_t b = first; b <= last; ++b) {
      if (cache.contains({object, b})) {
        ++report.hits;
        continue;
      }
      ++report.misses;
      missing[static_cast<std::size_t>(b - first)] = true;
      if (first_miss < 0) first_miss = b;
      last_miss = b;
    }

    if (first_miss >= 0) {
      if (config.fetch() == FetchMode::Span) {
        report.origin_requests += 1;
        report.origin_bytes =
            checked_add(report.origin_bytes, checked_mul(last_miss - first_miss + 1, block, "origin bytes"), "origin bytes");
      } else {
        for (std::size_t i = 0; i < missing.size(); ++i) {
          if (!missing[i]) continue;
          std::size_t run_end = i;
          while (run_end + 1 < missing.size() && missing[run_end + 1]) ++run_end;
          report.origin_requests += 1;
          report.origin_bytes = checked_add(
              report.origin_bytes, checked_mul(static_cast<std::int64_t>(run_end - i + 1), block, "origin bytes"),
              "origin bytes");
          i = run_end;
        }
      }
    }

    for (std::int64_t b = first; b <= last; ++b) cache.touch({object, b});
    cache.evict_to_capacity();
  }

  const std::int64_t touches = report.hits + report.misses;
  report.hit_ratio = touches == 0 ? 0.0 : static_cast<double>(report.hits) / static_cast<double>(touches);
  report.read_amplification = report.requested_bytes == 0 ? 0.0
                                                          : static_cast<double>(report.origin_bytes) /
                                                                static_cast<double>(report.requested_bytes);
  return report;
}

std::vector<MissRatioPoint> miss_ratio_curve(const Trace& trace, const CacheConfig& config_template,
                                             std::span<const std::int64_t> capacities) {
  for (std::size_t i = 1; i < capacities.size(); ++i) {
    if (capacities[i] < capacities[i - 1]) throw ValidationError("miss-ratio capacities must be ascending");
  }
  std::vector<MissRatioPoint> curve;
  curve.reserve(capacities.size());
  for (auto capacity : capacities) {
    const auto report = simulate(trace, config_template.with_capacity(capacity));
    curve.push_back({capacity, report.hit_ratio, report.hits, report.misses});
  }
  return curve;
}

Money price_origin(const CacheReport& report, const PriceBook& book) {
  return cost_of(book, report.origin_tally());
}

RequestTally no_cache_tally(const Trace& trace) {
  RequestTally t;
  for (const auto& r : trace.records()) {
    if (r.kind == RequestKind::Get) t.add(RequestKind::Get, 1, r.length);
  }
  return t;
}

nlohmann::json to_json(const CacheReport& report) {
  return {{"requests", report.requests},
          {"hits", report.hits},
          {"misses", report.misses},
          {"origin_requests", report.origin_requests},
          {"origin_bytes", report.origin_bytes},
          {"requested_bytes", report.requested_bytes},
          {"read_amplification", report.read_amplification},
          {"hit_ratio", report.hit_ratio}};
}

}  // namespace iocost
