#include "iocost/columnar.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <utility>

#include "iocost/errors.hpp"
#include "json_fields.hpp"

namespace iocost {

const Column& TableLayout::column(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw ValidationError("table '" + table_ + "' has no column '" + name + "'");
}

bool TableLayout::has_column(const std::string& name) const {
  return std::any_of(columns_.begin(), columns_.end(), [&](const Column& c) { return c.name == name; });
}

std::int64_t TableLayout::total_bytes() const {
  std::int64_t total = 0;
  for (const auto& c : columns_) {
    for (const auto& p : c.pages) total = checked_add(total, p.byte_length, "table bytes");
  }
  return total;
}

TableLayout build_layout(std::string table, std::int64_t rows, const std::vector<ColumnSpec>& columns) {
  if (rows < 1) throw ValidationError("table must have at least one row");
  if (columns.empty()) throw ValidationError("table must have at least one column");

  TableLayout layout;
  layout.table_ = std::move(table);
  layout.rows_ = rows;
  std::int64_t file_offset = 0;
  std::set<std::string> names;
  for (const auto& spec : columns) {
    if (spec.name.empty()) throw ValidationError("column name must not be empty");
    if (!names.insert(spec.name).second) throw ValidationError("duplicate column '" + spec.name + "'");
    if (spec.value_bytes < 1) throw ValidationError("column '" + spec.name + "': value_bytes must be >= 1");
    if (spec.page_bytes < spec.value_bytes) {
      throw ValidationError("column '" + spec.name + "': page_bytes must be >= value_bytes");
    }
    Column col{spec.name, spec.page_bytes, spec.value_bytes, {}};
    const std::int64_t rows_per_page = spec.page_bytes / spec.value_bytes;
    for (std::int64_t first = 0; first < rows; first += rows_per_page) {
      const std::int64_t count = std::min(rows_per_page, rows - first);
      const std::int64_t length = checked_mul(count, spec.value_bytes, "page bytes");
      col.pages.push_back({first, count, file_offset, length});
      file_offset = checked_add(file_offset, length, "file offset");
    }
    layout.columns_.push_back(std::move(col));
  }
  return layout;
}

TableLayout layout_from_json(const nlohmann::json& j) {
  using namespace detail;
  const std::string where = "layout";
  std::vector<ColumnSpec> specs;
  const auto& cols = require(j, "columns", where);
  if (!cols.is_array()) throw ValidationError("layout: field 'columns' must be an array");
  for (const auto& c : cols) {
    specs.push_back({string_field(c, "name", "layout column"), bytes_field_or(c, "page_bytes", "layout column", kMB),
                     bytes_field_or(c, "value_bytes", "layout column", 8)});
  }
  return build_layout(string_field(j, "table", where), int_field(j, "rows", where), specs);
}

void ColumnData::set(std::string name, std::vector<std::int64_t> values) { values_[std::move(name)] = std::move(values); }

const std::vector<std::int64_t>& ColumnData::values(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw ValidationError("no data for column '" + name + "'");
  return it->second;
}

void ColumnData::check_against(const TableLayout& layout) const {
  for (const auto& c : layout.columns()) {
    if (static_cast<std::int64_t>(values(c.name).size()) != layout.rows()) {
      throw ValidationError("column '" + c.name + "' has " + std::to_string(values(c.name).size()) +
                            " values, expected " + std::to_string(layout.rows()));
    }
  }
}

ColumnData random_column_data(const TableLayout& layout, std::uint64_t seed, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ValidationError("random column data needs lo <= hi");
  std::mt19937_64 rng(seed);
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  ColumnData data;
  for (const auto& c : layout.columns()) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(layout.rows()));
    for (auto& v : values) v = lo + static_cast<std::int64_t>(rng() % span);
    data.set(c.name, std::move(values));
  }
  return data;
}

ColumnData column_data_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("column data must be an object of name -> [int...]");
  ColumnData data;
  for (const auto& [name, values] : j.items()) {
    if (!values.is_array()) throw ValidationError("column data '" + name + "' must be an array");
    std::vector<std::int64_t> v;
    for (const auto& x : values) v.push_back(detail::as_int(x, name, "column data"));
    data.set(name, std::move(v));
  }
  return data;
}

std::string_view to_string(Comparator op) {
  switch (op) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Equal: return "=";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Greater: return ">";
  }
  return "?";
}

Comparator parse_comparator(std::string_view text) {
  for (auto op : {Comparator::Less, Comparator::LessEqual, Comparator::Equal, Comparator::GreaterEqual,
                  Comparator::Greater}) {
    if (to_string(op) == text) return op;
  }
  throw ValidationError("unknown comparator '" + std::string(text) + "'");
}

bool Predicate::matches(std::int64_t value) const {
  switch (op) {
    case Comparator::Less: return value < literal;
    case Comparator::LessEqual: return value <= literal;
    case Comparator::Equal: return value == literal;
    case Comparator::GreaterEqual: return value >= literal;
    case Comparator::Greater: return value > literal;
  }
  return false;
}

Query query_from_json(const nlohmann::json& j) {
  using namespace detail;
  Query q;
  if (j.contains("select")) {
    if (!j["select"].is_array()) throw ValidationError("query: field 'select' must be an array");
    for (const auto& s : j["select"]) q.select.push_back(as_string(s, "select", "query"));
  }
  if (j.contains("where")) {
    if (!j["where"].is_array()) throw ValidationError("query: field 'where' must be an array");
    for (const auto& w : j["where"]) {
      q.where.push_back({string_field(w, "col", "query predicate"),
                         parse_comparator(string_field(w, "op", "query predicate")),
                         int_field(w, "lit", "query predicate")});
    }
  }
  if (j.contains("pushdown")) {
    if (!j["pushdown"].is_boolean()) throw ValidationError("query: field 'pushdown' must be a boolean");
    q.pushdown = j["pushdown"].get<bool>();
  }
  return q;
}

RowSet all_rows(std::int64_t rows) {
  RowSet out(static_cast<std::size_t>(std::max<std::int64_t>(rows, 0)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int64_t>(i);
  return out;
}

RowSet apply_predicate(std::span<const std::int64_t> values, const Predicate& pred, const RowSet& candidates) {
  RowSet out;
  for (auto row : candidates) {
    if (row < 0 || static_cast<std::size_t>(row) >= values.size()) {
      throw ValidationError("candidate row " + std::to_string(row) + " out of range");
    }
    if (pred.matches(values[static_cast<std::size_t>(row)])) out.push_back(row);
  }
  return out;
}

std::vector<std::size_t> pages_for_rows(const TableLayout& layout, const std::string& column, const RowSet& rows) {
  const auto& pages = layout.column(column).pages;
  std::vector<std::size_t> out;
  std::size_t p = 0;
  for (auto row : rows) {
    while (p < pages.size() && pages[p].end_row() <= row) ++p;
    if (p == pages.size()) break;
    if (row >= pages[p].first_row && (out.empty() || out.back() != p)) out.push_back(p);
  }
  return out;
}

RequestTally ScanPlan::tally() const {
  RequestTally t;
  t.add(RequestKind::Get, request_count, total_bytes);
  return t;
}

ScanPlan plan_scan(const TableLayout& layout, const ColumnData& data, const std::vector<std::string>& projection,
                   const std::vector<Predicate>& predicates, bool pushdown) {
  if (projection.empty() && predicates.empty()) {
    throw ValidationError("scan needs a projection or at least one predicate");
  }
  for (const auto& name : projection) layout.column(name);
  for (const auto& pred : predicates) {
    layout.column(pred.column);
    if (static_cast<std::int64_t>(data.values(pred.column).size()) != layout.rows()) {
      throw ValidationError("column '" + pred.column + "' data does not match the table row count");
    }
  }

  ScanPlan plan;
  std::set<std::pair<std::string, std::size_t>> fetched;
  auto read_pages = [&](const std::string& name, const std::vector<std::size_t>& page_ids) {
    const auto& col = layout.column(name);
    for (auto id : page_ids) {
      if (!fetched.emplace(name, id).second) continue;
      const auto& page = col.pages[id];
      plan.requests.push_back({layout.table(), page.byte_offset, page.byte_length, {{name, id}}});
      plan.request_count += 1;
      plan.total_bytes = checked_add(plan.total_bytes, page.byte_length, "scan bytes");
    }
  };
  auto every_page = [&](const std::string& name) {
    std::vector<std::size_t> ids(layout.column(name).pages.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    return ids;
  };

  RowSet survivors = all_rows(layout.rows());
  if (pushdown) {
    for (std::size_t i = 0; i < predicates.size(); ++i) {
      const auto& pred = predicates[i];
      read_pages(pred.column, i == 0 ? every_page(pred.column) : pages_for_rows(layout, pred.column, survivors));
      survivors = apply_predicate(data.values(pred.column), pred, survivors);
    }
    for (const auto& name : projection) read_pages(name, pages_for_rows(layout, name, survivors));
  } else {
    for (const auto& pred : predicates) read_pages(pred.column, every_page(pred.column));
    for (const auto& name : projection) read_pages(name, every_page(name));
    for (const auto& pred : predicates) survivors = apply_predicate(data.values(pred.column), pred, survivors);
  }
  plan.survivors = std::move(survivors);
  return plan;
}

ScanPlan coalesce_requests(const ScanPlan& plan, std::int64_t max_gap) {
  if (max_gap < 0) throw ValidationError("coalesce max-gap must be >= 0");
  std::vector<ReadRequest> sorted = plan.requests;
  std::stable_sort(sorted.begin(), sorted.end(), [](const ReadRequest& a, const ReadRequest& b) {
    return std::tie(a.object, a.offset) < std::tie(b.object, b.offset);
  });

  ScanPlan out;
  out.survivors = plan.survivors;
  for (auto& req : sorted) {
    if (!out.requests.empty()) {
      auto& last = out.requests.back();
      if (last.object == req.object && req.offset >= last.end() && req.offset - last.end() <= max_gap) {
        last.length = std::max(last.end(), req.end()) - last.offset;
        last.pages.insert(last.pages.end(), req.pages.begin(), req.pages.end());
        continue;
      }
    }
    out.requests.push_back(std::move(req));
  }
  for (const auto& r : out.requests) out.total_bytes = checked_add(out.total_bytes, r.length, "scan bytes");
  out.request_count = static_cast<std::int64_t>(out.requests.size());
  return out;
}

ScanProjection fleet_scan_projection(std::int64_t daily_bytes_pushdown, std::int64_t avg_request_bytes,
                                     DecimalFactor inflation, std::int64_t page_bytes) {
  if (daily_bytes_pushdown <= 0 || avg_request_bytes <= 0 || page_bytes <= 0 || inflation.millionths() <= 0) {
    throw ValidationError("scan projection parameters must all be > 0");
  }
  ScanProjection p;
  p.pushdown_bytes = daily_bytes_pushdown;
  p.pushdown_requests = ceil_div(daily_bytes_pushdown, avg_request_bytes);
  p.full_scan_bytes = inflation.apply(daily_bytes_pushdown);
  p.full_scan_requests = ceil_div(p.full_scan_bytes, page_bytes);
  return p;
}

nlohmann::json to_json(const ScanPlan& plan) {
  nlohmann::json reqs = nlohmann::json::array();
  for (const auto& r : plan.requests) {
    nlohmann::json pages = nlohmann::json::array();
    for (const auto& p : r.pages) pages.push_back({{"column", p.column}, {"page", p.page}});
    reqs.push_back({{"object", r.object}, {"offset", r.offset}, {"length", r.length}, {"pages", pages}});
  }
  return {{"requests", reqs},
          {"survivors", plan.survivors},
          {"request_count", plan.request_count},
          {"total_bytes", plan.total_bytes}};
}

nlohmann::json to_json(const ScanProjection& p) {
  return {{"pushdown_bytes", p.pushdown_bytes},
          {"pushdown_requests", p.pushdown_requests},
          {"full_scan_bytes", p.full_scan_bytes},
          {"full_scan_requests", p.full_scan_requests}};
}

}  // namespace iocost
