#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "iocost/pricing.hpp"
#include "iocost/units.hpp"

namespace iocost {

// Sorted, duplicate-free row indexes.
using RowSet = std::vector<std::int64_t>;

struct Page {
  std::int64_t first_row = 0;
  std::int64_t row_count = 0;
  std::int64_t byte_offset = 0;  // within the table file
  std::int64_t byte_length = 0;

  std::int64_t end_row() const { return first_row + row_count; }
};

struct Column {
  std::string name;
  std::int64_t page_bytes = 0;
  std::int64_t value_bytes = 0;
  std::vector<Page> pages;
};

struct ColumnSpec {
  std::string name;
  std::int64_t page_bytes = kMB;
  std::int64_t value_bytes = 8;
};

// Column-chunked file geometry: columns are stored back to back, each as a
// run of fixed-capacity pages.
class TableLayout {
 public:
  const std::string& table() const { return table_; }
  std::int64_t rows() const { return rows_; }
  const std::vector<Column>& columns() const { return columns_; }
  // Throws ValidationError for unknown names.
  const Column& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  std::int64_t total_bytes() const;

 private:
  friend TableLayout build_layout(std::string table, std::int64_t rows, const std::vector<ColumnSpec>& columns);
  std::string table_;
  std::int64_t rows_ = 0;
  std::vector<Column> columns_;
};

// Packs floor(page_bytes / value_bytes) rows per page, last page partial.
TableLayout build_layout(std::string table, std::int64_t rows, const std::vector<ColumnSpec>& columns);

// Layout JSON: {"table", "rows", "columns": [{"name", "page_bytes", "value_bytes"}]}.
// Byte fields accept integers or unit strings such as "1MB".
TableLayout layout_from_json(const nlohmann::json& j);

// In-memory column values aligned to row index.
class ColumnData {
 public:
  ColumnData() = default;
  void set(std::string name, std::vector<std::int64_t> values);
  const std::vector<std::int64_t>& values(const std::string& name) const;
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  // Throws unless every layout column has exactly rows() values.
  void check_against(const TableLayout& layout) const;

 private:
  std::map<std::string, std::vector<std::int64_t>> values_;
};

// Uniform random integers in [lo, hi] for every column of a layout.
ColumnData random_column_data(const TableLayout& layout, std::uint64_t seed, std::int64_t lo, std::int64_t hi);
ColumnData column_data_from_json(const nlohmann::json& j);

enum class Comparator { Less, LessEqual, Equal, GreaterEqual, Greater };
std::string_view to_string(Comparator op);
Comparator parse_comparator(std::string_view text);

struct Predicate {
  std::string column;
  Comparator op = Comparator::Equal;
  std::int64_t literal = 0;

  bool matches(std::int64_t value) const;
};

struct Query {
  std::vector<std::string> select;
  std::vector<Predicate> where;
  bool pushdown = true;
};

// Query JSON: {"select": [...], "where": [{"col", "op", "lit"}], "pushdown": bool}.
Query query_from_json(const nlohmann::json& j);

RowSet all_rows(std::int64_t rows);

// Candidates whose value in `values` satisfies the predicate.
RowSet apply_predicate(std::span<const std::int64_t> values, const Predicate& pred, const RowSet& candidates);

// Pages of `column` whose row range intersects `rows`.
std::vector<std::size_t> pages_for_rows(const TableLayout& layout, const std::string& column, const RowSet& rows);

struct PageRef {
  std::string column;
  std::size_t page = 0;
  friend bool operator==(const PageRef&, const PageRef&) = default;
};

// One ranged GET.
struct ReadRequest {
  std::string object;
  std::int64_t offset = 0;
  std::int64_t length = 0;
  std::vector<PageRef> pages;

  std::int64_t end() const { return offset + length; }
};

struct ScanPlan {
  std::vector<ReadRequest> requests;
  RowSet survivors;
  std::int64_t request_count = 0;
  std::int64_t total_bytes = 0;

  RequestTally tally() const;
};

// With pushdown, predicate columns after the first and projection columns
// read only the pages covering the rows that survived so far. Without it,
// every page of every referenced column is read. Each page is read at
// most once per plan.
ScanPlan plan_scan(const TableLayout& layout, const ColumnData& data, const std::vector<std::string>& projection,
                   const std::vector<Predicate>& predicates, bool pushdown);
inline ScanPlan plan_scan(const TableLayout& layout, const ColumnData& data, const Query& q) {
  return plan_scan(layout, data, q.select, q.where, q.pushdown);
}

// Merges requests on the same object whose byte gap is <= max_gap. Gap
// bytes count as transferred. Output is ordered by (object, offset).
ScanPlan coalesce_requests(const ScanPlan& plan, std::int64_t max_gap);

// Fleet-level daily request volume with and without pushdown.
struct ScanProjection {
  std::int64_t pushdown_bytes = 0;
  std::int64_t pushdown_requests = 0;
  std::int64_t full_scan_bytes = 0;
  std::int64_t full_scan_requests = 0;
};

// pushdown requests = ceil(daily / avg_request); full-scan bytes =
// daily × inflation; full-scan requests = ceil(full-scan bytes / page).
ScanProjection fleet_scan_projection(std::int64_t daily_bytes_pushdown, std::int64_t avg_request_bytes,
                                     DecimalFactor inflation, std::int64_t page_bytes);

nlohmann::json to_json(const ScanPlan& plan);
nlohmann::json to_json(const ScanProjection& p);

}  // namespace iocost
