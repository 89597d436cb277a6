#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iocost/pricing.hpp"
#include "iocost/units.hpp"

namespace iocost {

// One storage request. Offsets and lengths are bytes; `len` is zero only
// for non-ranged kinds.
struct AccessRecord {
  std::int64_t ts_ms = 0;
  std::string object;
  std::int64_t offset = 0;
  std::int64_t length = 0;
  RequestKind kind = RequestKind::Get;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

struct TraceProvenance {
  enum class Source { Ingested, Synthesized };
  Source source = Source::Ingested;
  std::optional<std::uint64_t> seed;
};

// Records in non-decreasing timestamp order.
class Trace {
 public:
  Trace() = default;
  // Stable-sorts by timestamp and validates every record.
  Trace(std::vector<AccessRecord> records, TraceProvenance provenance = {}, std::int64_t epoch_ms = 0);

  const std::vector<AccessRecord>& records() const { return records_; }
  const TraceProvenance& provenance() const { return provenance_; }
  std::int64_t epoch_ms() const { return epoch_ms_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<AccessRecord> records_;
  TraceProvenance provenance_;
  std::int64_t epoch_ms_ = 0;
};

// JSON-lines, one record per line:
//   {"ts_ms": int, "obj": string, "off": int, "len": int, "kind": "get"|...}
// Blank lines are skipped. Throws ParseError("line N: ...") on malformed
// input and ValidationError on out-of-range values.
Trace parse_trace(std::istream& in);
Trace load_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);
std::string serialize_trace(const Trace& trace);

struct CdfPoint {
  std::int64_t size = 0;
  double fraction = 0.0;
  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

// Empirical step CDF of request sizes.
class SizeCdf {
 public:
  // Requires strictly increasing sizes, non-decreasing fractions in (0, 1]
  // and a terminal fraction of exactly 1.0.
  explicit SizeCdf(std::vector<CdfPoint> points);

  const std::vector<CdfPoint>& points() const { return points_; }
  // Fraction of samples with size <= `size`.
  double at(std::int64_t size) const;

 private:
  std::vector<CdfPoint> points_;
};

// CDF over the lengths of get records; throws ValidationError if none.
SizeCdf size_cdf(const Trace& trace);
// Smallest sampled size whose cumulative fraction is >= p, p in (0, 1].
std::int64_t quantile(const SizeCdf& cdf, double p);

inline constexpr std::int64_t kDefaultBlockBytes = kMB;
inline constexpr std::int64_t kDefaultReuseThresholdMs = 2 * kMsPerHour;

struct ReuseStats {
  std::vector<std::int64_t> intervals_ms;
  // Absent when there are no re-accesses.
  std::optional<double> median_ms;
  std::optional<double> fraction_under_threshold;
  std::int64_t threshold_ms = kDefaultReuseThresholdMs;
};

// Intervals between consecutive get accesses to the same block, where a
// record's block is (object, floor(offset / granularity)).
ReuseStats reuse_intervals(const Trace& trace, std::int64_t granularity = kDefaultBlockBytes,
                           std::int64_t threshold_ms = kDefaultReuseThresholdMs);

// Share of get requests landing on the k most-requested blocks.
double popularity_share(const Trace& trace, std::int64_t granularity, std::int64_t k);

// ---- synthesis ------------------------------------------------------------

struct SizeAnchor {
  std::int64_t size = 0;
  double fraction = 0.0;
};

// Exponent calibrated so that the top 10,000 of 10^6 Zipf-ranked objects
// take ~91.5% of requests (see calibrate_zipf_exponent).
inline constexpr double kDefaultZipfExponent = 1.208;

struct SynthesisSpec {
  std::int64_t records = 100'000;
  // Lower edge of the first size bucket.
  std::int64_t min_size = kKB;
  // Cumulative anchors; the last one caps generated sizes and must be 1.0.
  std::vector<SizeAnchor> anchors{{10 * kKB, 0.5}, {kMB, 0.9}, {100 * kMB, 1.0}};
  std::int64_t universe = 1'000'000;
  double zipf_exponent = kDefaultZipfExponent;
  std::int64_t duration_ms = 5 * kMsPerDay;
  // Offsets fall inside the first block of an object, so blocks and
  // objects share the same popularity ranking.
  std::int64_t block_bytes = kDefaultBlockBytes;
};

void validate(const SynthesisSpec& spec);

// Deterministic for a fixed (spec, seed). Sizes are piecewise log-uniform
// between anchors; objects follow a Zipf law over `universe`; timestamps
// are uniform over `duration_ms`. All records are gets.
Trace synthesize_trace(const SynthesisSpec& spec, std::uint64_t seed);

// Analytical share of the k most popular of `universe` Zipf(s) items.
double zipf_top_share(std::int64_t universe, std::int64_t k, double exponent);
// Bisection for the exponent whose top-k share equals `target`.
double calibrate_zipf_exponent(std::int64_t universe, std::int64_t k, double target);

}  // namespace iocost
