#include "iocost/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "iocost/errors.hpp"

namespace iocost {
namespace {

bool is_ranged(RequestKind kind) { return kind == RequestKind::Get || kind == RequestKind::Put; }

bool is_trace_kind(RequestKind kind) {
  return kind != RequestKind::Select && kind != RequestKind::GetBucketConfig;
}

struct BlockKey {
  std::string object;
  std::int64_t block = 0;
  bool operator==(const BlockKey&) const = default;
};

struct BlockKeyHash {
  std::size_t operator()(const BlockKey& k) const {
    return std::hash<std::string>{}(k.object) * 1'000'003u ^ std::hash<std::int64_t>{}(k.block);
  }
};

BlockKey block_of(const AccessRecord& r, std::int64_t granularity) {
  return {r.object, r.offset / granularity};
}

// 53 random bits mapped to [0, 1). std::uniform_real_distribution is not
// pinned down by the standard, this is.
double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::int64_t required_int(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("line " + std::to_string(line) + ": missing field '" + key + "'");
  if (!it->is_number_integer()) {
    throw ParseError("line " + std::to_string(line) + ": field '" + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace

Trace::Trace(std::vector<AccessRecord> records, TraceProvenance provenance, std::int64_t epoch_ms)
    : records_(std::move(records)), provenance_(provenance), epoch_ms_(epoch_ms) {
  for (const auto& r : records_) {
    if (r.ts_ms < 0) throw ValidationError("negative timestamp " + std::to_string(r.ts_ms));
    if (r.offset < 0) throw ValidationError("negative offset " + std::to_string(r.offset));
    if (r.length < 0) throw ValidationError("negative length " + std::to_string(r.length));
    if (is_ranged(r.kind) && r.length == 0) {
      throw ValidationError(std::string(to_string(r.kind)) + " record on '" + r.object + "' has zero length");
    }
    if (r.object.empty()) throw ValidationError("record with empty object id");
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const AccessRecord& a, const AccessRecord& b) { return a.ts_ms < b.ts_ms; });
}

Trace parse_trace(std::istream& in) {
  std::vector<AccessRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ParseError("line " + std::to_string(line_no) + ": record must be a JSON object");

    AccessRecord r;
    r.ts_ms = required_int(j, "ts_ms", line_no);
    auto obj = j.find("obj");
    if (obj == j.end() || !obj->is_string()) {
      throw ParseError("line " + std::to_string(line_no) + ": missing string field 'obj'");
    }
    r.object = obj->get<std::string>();
    auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) {
      throw ParseError("line " + std::to_string(line_no) + ": missing string field 'kind'");
    }
    const auto kind_name = kind->get<std::string>();
    bool known = false;
    for (auto k : kAllRequestKinds) {
      if (to_string(k) == kind_name && is_trace_kind(k)) {
        r.kind = k;
        known = true;
      }
    }
    if (!known) throw ParseError("line " + std::to_string(line_no) + ": unsupported kind '" + kind_name + "'");
    if (is_ranged(r.kind)) {
      r.offset = required_int(j, "off", line_no);
      r.length = required_int(j, "len", line_no);
    } else {
      r.offset = j.contains("off") ? required_int(j, "off", line_no) : 0;
      r.length = j.contains("len") ? required_int(j, "len", line_no) : 0;
    }
    if (r.length < 0 || r.offset < 0 || r.ts_ms < 0) {
      throw ValidationError("line " + std::to_string(line_no) + ": negative " +
                            (r.length < 0 ? "length" : r.offset < 0 ? "offset" : "timestamp"));
    }
    if (is_ranged(r.kind) && r.length == 0) {
      throw ValidationError("line " + std::to_string(line_no) + ": ranged request with zero length");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ValidationError("empty trace");
  return Trace(std::move(records), TraceProvenance{TraceProvenance::Source::Ingested, std::nullopt});
}

Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace.records()) {
    nlohmann::ordered_json j;
    j["ts_ms"] = r.ts_ms;
    j["obj"] = r.object;
    j["off"] = r.offset;
    j["len"] = r.length;
    j["kind"] = std::string(to_string(r.kind));
    out << j.dump() << '\n';
  }
}

std::string serialize_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

SizeCdf::SizeCdf(std::vector<CdfPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw ValidationError("size CDF needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.fraction > 0.0 && p.fraction <= 1.0)) throw ValidationError("CDF fraction outside (0, 1]");
    if (i > 0) {
      if (p.size <= points_[i - 1].size) throw ValidationError("CDF sizes must be strictly increasing");
      if (p.fraction < points_[i - 1].fraction) throw ValidationError("CDF fractions must be non-decreasing");
    }
  }
  if (points_.back().fraction != 1.0) throw ValidationError("CDF must end at fraction 1.0");
}

double SizeCdf::at(std::int64_t size) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), size,
                             [](std::int64_t s, const CdfPoint& p) { return s < p.size; });
  return it == points_.begin() ? 0.0 : std::prev(it)->fraction;
}

SizeCdf size_cdf(const Trace& trace) {
  std::vector<std::int64_t> lengths;
  for (const auto& r : trace.records()) {
    if (r.kind == RequestKind::Get) lengths.push_back(r.length);
  }
  if (lengths.empty()) throw ValidationError("trace has no get records");
  std::sort(lengths.begin(), lengths.end());

  const auto total = static_cast<double>(lengths.size());
  std::vector<CdfPoint> points;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i + 1 < lengths.size() && lengths[i + 1] == lengths[i]) continue;
    points.push_back({lengths[i], static_cast<double>(i + 1) / total});
  }
  return SizeCdf(std::move(points));
}

std::int64_t quantile(const SizeCdf& cdf, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("quantile probability must be in (0, 1]");
  const auto& pts = cdf.points();
  auto it = std::lower_bound(pts.begin(), pts.end(), p,
                             [](const CdfPoint& pt, double q) { return pt.fraction < q; });
  return it->size;
}

ReuseStats reuse_intervals(const Trace& trace, std::int64_t granularity, std::int64_t threshold_ms) {
  if (granularity <= 0) throw ValidationError("reuse granularity must be positive");
  ReuseStats stats;
  stats.threshold_ms = threshold_ms;
  std::unordered_map<BlockKey, std::int64_t, BlockKeyHash> last_seen;
  for (const auto& r : trace.records()) {
    if (r.kind != RequestKind::Get) continue;
    auto [it, fresh] = last_seen.try_emplace(block_of(r, granularity), r.ts_ms);
    if (!fresh) {
      stats.intervals_ms.push_back(r.ts_ms - it->second);
      it->second = r.ts_ms;
    }
  }
  if (stats.intervals_ms.empty()) return stats;

  std::vector<std::int64_t> sorted = stats.intervals_ms;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  stats.median_ms = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                               : (static_cast<double>(sorted[n / 2 - 1]) + static_cast<double>(sorted[n / 2])) / 2.0;
  const auto under = std::lower_bound(sorted.begin(), sorted.end(), threshold_ms) - sorted.begin();
  stats.fraction_under_threshold = static_cast<double>(under) / static_cast<double>(n);
  return stats;
}

double popularity_share(const Trace& trace, std::int64_t granularity, std::int64_t k) {
  if (granularity <= 0) throw ValidationError("popularity granularity must be positive");
  if (k < 1) throw ValidationError("popularity k must be >= 1");
  std::unordered_map<BlockKey, std::int64_t, BlockKeyHash> counts;
  std::int64_t total = 0;
  for (const auto& r : trace.records()) {
    if (r.kind != RequestKind::Get) continue;
    ++counts[block_of(r, granularity)];
    ++total;
  }
  if (total == 0) return 0.0;

  std::vector<std::int64_t> by_count;
  by_count.reserve(counts.size());
  for (const auto& [_, c] : counts) by_count.push_back(c);
  const auto top = static_cast<std::size_t>(std::min<std::int64_t>(k, static_cast<std::int64_t>(by_count.size())));
  std::nth_element(by_count.begin(), by_count.begin() + static_cast<std::ptrdiff_t>(top) - 1, by_count.end(),
                   std::greater<>());
  std::int64_t hot = 0;
  for (std::size_t i = 0; i < top; ++i) hot += by_count[i];
  return static_cast<double>(hot) / static_cast<double>(total);
}

void validate(const SynthesisSpec& spec) {
  if (spec.records < 1) throw ValidationError("synthesis needs at least one record");
  if (spec.min_size < 1) throw ValidationError("synthesis min_size must be >= 1");
  if (spec.anchors.empty()) throw ValidationError("synthesis needs at least one size anchor");
  std::int64_t prev_size = spec.min_size;
  double prev_fraction = 0.0;
  for (const auto& a : spec.anchors) {
    if (a.size <= prev_size) throw ValidationError("size anchors must be strictly increasing and above min_size");
    if (!(a.fraction > prev_fraction && a.fraction <= 1.0)) {
      throw ValidationError("anchor fractions must be strictly increasing within (0, 1]");
    }
    prev_size = a.size;
    prev_fraction = a.fraction;
  }
  if (spec.anchors.back().fraction != 1.0) throw ValidationError("last size anchor must have fraction 1.0");
  if (spec.universe < 1) throw ValidationError("synthesis universe must be >= 1");
  if (!std::isfinite(spec.zipf_exponent) || spec.zipf_exponent < 0.0) {
    throw ValidationError("zipf exponent must be finite and non-negative");
  }
  if (spec.duration_ms < 1) throw ValidationError("synthesis duration must be >= 1 ms");
  if (spec.block_bytes < 1) throw ValidationError("synthesis block_bytes must be >= 1");
}

Trace synthesize_trace(const SynthesisSpec& spec, std::uint64_t seed) {
  validate(spec);
  std::mt19937_64 rng(seed);

  std::vector<double> popularity(static_cast<std::size_t>(spec.universe));
  double acc = 0.0;
  for (std::size_t i = 0; i < popularity.size(); ++i) {
    acc += std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
    popularity[i] = acc;
  }

  std::vector<AccessRecord> records;
  records.reserve(static_cast<std::size_t>(spec.records));
  for (std::int64_t n = 0; n < spec.records; ++n) {
    const double pick = unit_interval(rng);
    std::size_t bucket = 0;
    while (bucket + 1 < spec.anchors.size() && pick >= spec.anchors[bucket].fraction) ++bucket;
    const auto lo = static_cast<double>(bucket == 0 ? spec.min_size : spec.anchors[bucket - 1].size);
    const std::int64_t hi = spec.anchors[bucket].size;
    const double x = lo * std::pow(static_cast<double>(hi) / lo, unit_interval(rng));
    std::int64_t length = bucket == 0 ? static_cast<std::int64_t>(std::ceil(x))
                                      : static_cast<std::int64_t>(std::floor(x)) + 1;
    length = std::clamp(length, bucket == 0 ? spec.min_size : static_cast<std::int64_t>(lo) + 1, hi);

    const double target = unit_interval(rng) * acc;
    const auto rank = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(popularity.begin(), popularity.end(), target) - popularity.begin()),
        popularity.size() - 1);

    const std::int64_t slack = spec.block_bytes - std::min(length, spec.block_bytes);
    const auto offset = static_cast<std::int64_t>(unit_interval(rng) * static_cast<double>(slack + 1));
    const auto ts = static_cast<std::int64_t>(unit_interval(rng) * static_cast<double>(spec.duration_ms));

    records.push_back({ts, "obj-" + std::to_string(rank), std::min(offset, slack), length, RequestKind::Get});
  }
  return Trace(std::move(records), TraceProvenance{TraceProvenance::Source::Synthesized, seed});
}

double zipf_top_share(std::int64_t universe, std::int64_t k, double exponent) {
  if (universe < 1 || k < 1) throw ValidationError("zipf universe and k must be >= 1");
  double top = 0.0;
  double all = 0.0;
  for (std::int64_t r = 1; r <= universe; ++r) {
    const double w = std::pow(static_cast<double>(r), -exponent);
    all += w;
    if (r <= k) top += w;
  }
  return top / all;
}

double calibrate_zipf_exponent(std::int64_t universe, std::int64_t k, double target) {
  if (!(target > 0.0 && target < 1.0)) throw ValidationError("calibration target must be in (0, 1)");
  if (k >= universe) throw ValidationError("calibration needs k < universe");
  double lo = 0.0;
  double hi = 8.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = (lo + hi) / 2.0;
    (zipf_top_share(universe, k, mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace iocost
