#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iocost/cachesim.hpp"
#include "iocost/columnar.hpp"
#include "iocost/joinplan.hpp"
#include "iocost/pricing.hpp"
#include "iocost/trace.hpp"

namespace iocost {

struct WorkloadSource {
  std::optional<std::filesystem::path> trace_file;
  std::optional<SynthesisSpec> synthesis;
  std::uint64_t seed = 0;
};

// Daily fleet scan volume, priced in the mode selected by `pushdown`.
struct ScanFleetSection {
  std::int64_t daily_bytes = 0;
  std::int64_t avg_request_bytes = 10 * kKB;
  DecimalFactor inflation = DecimalFactor::from_millionths(5 * DecimalFactor::kScale);
  std::int64_t page_bytes = kMB;
  bool pushdown = true;
};

struct ScanTableSection {
  TableLayout layout;
  Query query;
  ColumnData data;
  std::optional<std::int64_t> coalesce_gap;
};

struct ScanSection {
  std::optional<ScanFleetSection> fleet;
  std::optional<ScanTableSection> table;
};

struct JoinSection {
  FleetParams fleet;
  std::int64_t probe_bytes = 0;
  JoinStrategy strategy = JoinStrategy::Auto;
  std::int64_t threshold_bytes = kDefaultBroadcastThreshold;
  std::int64_t request_bytes = 10 * kKB;
};

struct ReportOptions {
  bool annual = false;  // adds total × 365
};

struct Scenario {
  std::string name;
  PriceBook book;
  std::optional<WorkloadSource> workload;
  std::optional<ScanSection> scan;
  std::optional<JoinSection> join;
  std::optional<CacheConfig> cache;
  ReportOptions report;
  nlohmann::json echo;  // the input document, reproduced in every report
};

// Relative file references resolve against `base_dir`.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir, std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

struct SectionCost {
  std::string name;
  RequestTally tally;
  Money cost;
  nlohmann::json detail = nlohmann::json::object();

  std::int64_t requests() const { return tally.total_requests(); }
  std::int64_t bytes() const { return tally.total_bytes(); }
};

struct ComparisonSide {
  std::string label;
  std::int64_t requests = 0;
  std::int64_t bytes = 0;
  Money cost;
};

struct Comparison {
  std::string name;
  ComparisonSide baseline;
  ComparisonSide alternative;
};

struct CostReport {
  std::string name;
  std::string price_book;
  std::optional<std::uint64_t> seed;
  nlohmann::json scenario = nlohmann::json::object();
  nlohmann::json workload = nullptr;
  std::vector<SectionCost> sections;
  std::vector<Comparison> comparisons;
  Money grand_total;
  bool annual = false;
  std::optional<Money> annual_total;
};

inline constexpr std::int64_t kDaysPerYear = 365;

// Runs every present section and prices it with the scenario's book.
CostReport run_scenario(const Scenario& s);

nlohmann::json to_json(const CostReport& r);
CostReport report_from_json(const nlohmann::json& j);

enum class ReportFormat { Json, Table };
ReportFormat parse_report_format(std::string_view text);
// JSON output is key-sorted and byte-stable for identical reports.
std::string render_report(const CostReport& r, ReportFormat format);

// Side-by-side request, byte and cost deltas of `b` relative to `a`.
// Throws ValidationError when the price books differ.
std::string compare(const CostReport& a, const CostReport& b);

}  // namespace iocost
