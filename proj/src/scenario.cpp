#include "iocost/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "iocost/errors.hpp"
#include "json_fields.hpp"

namespace iocost {
namespace fs = std::filesystem;
using detail::as_bytes;
using detail::as_factor;
using detail::as_int;
using detail::as_string;
using detail::require;

namespace {

nlohmann::json read_json_file(const fs::path& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ValidationError("field '" + key + "': file '" + path.string() + "' does not exist or is unreadable");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("field '" + key + "': file '" + path.string() + "' is not valid JSON (" + e.what() + ")");
  }
}

fs::path resolve(const fs::path& base, const std::string& file) {
  fs::path p(file);
  return p.is_absolute() ? p : base / p;
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (known.count(key) == 0) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

bool bool_or(const nlohmann::json& j, const std::string& key, const std::string& where, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ValidationError(where + ": field '" + key + "' must be a boolean");
  return j[key].get<bool>();
}

// Object given inline under `key` or loaded from the file named by `key_file`.
nlohmann::json inline_or_file(const nlohmann::json& j, const std::string& key, const fs::path& base,
                              const std::string& where) {
  const std::string file_key = key + "_file";
  if (j.contains(key)) return j[key];
  if (j.contains(file_key)) {
    return read_json_file(resolve(base, as_string(j[file_key], file_key, where)), where + "." + file_key);
  }
  throw ValidationError(where + ": missing field '" + key + "' (or '" + file_key + "')");
}

SynthesisSpec synthesis_from_json(const nlohmann::json& j) {
  const std::string where = "workload.synthesize";
  reject_unknown_keys(j, {"records", "seed", "min_size", "anchors", "p50", "p90", "universe", "zipf_exponent",
                          "duration_ms", "block_bytes"},
                      where);
  SynthesisSpec spec;
  if (j.contains("records")) spec.records = as_int(j["records"], "records", where);
  if (j.contains("min_size")) spec.min_size = as_bytes(j["min_size"], "min_size", where);
  if (j.contains("anchors")) {
    if (j.contains("p50") || j.contains("p90")) throw ValidationError(where + ": give either 'anchors' or 'p50'/'p90'");
    spec.anchors.clear();
    for (const auto& a : j["anchors"]) {
      const auto& fraction = require(a, "fraction", where + ".anchors");
      if (!fraction.is_number()) throw ValidationError(where + ".anchors: field 'fraction' must be a number");
      spec.anchors.push_back({as_bytes(require(a, "size", where + ".anchors"), "size", where), fraction.get<double>()});
    }
  }
  if (j.contains("p50")) spec.anchors[0].size = as_bytes(j["p50"], "p50", where);
  if (j.contains("p90")) spec.anchors[1].size = as_bytes(j["p90"], "p90", where);
  if (j.contains("universe")) spec.universe = as_int(j["universe"], "universe", where);
  if (j.contains("zipf_exponent")) {
    if (!j["zipf_exponent"].is_number()) throw ValidationError(where + ": field 'zipf_exponent' must be a number");
    spec.zipf_exponent = j["zipf_exponent"].get<double>();
  }
  if (j.contains("duration_ms")) spec.duration_ms = as_int(j["duration_ms"], "duration_ms", where);
  if (j.contains("block_bytes")) spec.block_bytes = as_bytes(j["block_bytes"], "block_bytes", where);
  validate(spec);
  return spec;
}

WorkloadSource workload_from_json(const nlohmann::json& j, const fs::path& base) {
  const std::string where = "workload";
  reject_unknown_keys(j, {"trace_file", "synthesize"}, where);
  WorkloadSource w;
  if (j.contains("trace_file") == j.contains("synthesize")) {
    throw ValidationError(where + ": give exactly one of 'trace_file' or 'synthesize'");
  }
  if (j.contains("trace_file")) {
    const auto path = resolve(base, as_string(j["trace_file"], "trace_file", where));
    if (!fs::is_regular_file(path)) {
      throw ValidationError(where + ": field 'trace_file': file '" + path.string() + "' does not exist");
    }
    w.trace_file = path;
  } else {
    const auto& synth = j["synthesize"];
    w.synthesis = synthesis_from_json(synth);
    w.seed = synth.contains("seed") ? static_cast<std::uint64_t>(as_int(synth["seed"], "seed", where)) : 0;
  }
  return w;
}

ScanSection scan_from_json(const nlohmann::json& j, const fs::path& base) {
  reject_unknown_keys(j, {"fleet", "table"}, "scan");
  ScanSection s;
  if (j.contains("fleet")) {
    const auto& f = j["fleet"];
    const std::string where = "scan.fleet";
    reject_unknown_keys(f, {"daily_bytes", "avg_request_bytes", "inflation", "page_bytes", "pushdown"}, where);
    ScanFleetSection fleet;
    fleet.daily_bytes = detail::bytes_field(f, "daily_bytes", where);
    fleet.avg_request_bytes = detail::bytes_field_or(f, "avg_request_bytes", where, fleet.avg_request_bytes);
    if (f.contains("inflation")) fleet.inflation = as_factor(f["inflation"], "inflation", where);
    fleet.page_bytes = detail::bytes_field_or(f, "page_bytes", where, fleet.page_bytes);
    fleet.pushdown = bool_or(f, "pushdown", where, true);
    s.fleet = fleet;
  }
  if (j.contains("table")) {
    const auto& t = j["table"];
    const std::string where = "scan.table";
    reject_unknown_keys(t, {"layout", "layout_file", "query", "query_file", "data", "coalesce_gap"}, where);
    ScanTableSection table;
    table.layout = layout_from_json(inline_or_file(t, "layout", base, where));
    table.query = query_from_json(inline_or_file(t, "query", base, where));
    const nlohmann::json data = t.value("data", nlohmann::json::object());
    if (data.contains("values")) {
      table.data = column_data_from_json(data["values"]);
      table.data.check_against(table.layout);
    } else {
      const auto seed = data.contains("seed") ? as_int(data["seed"], "seed", where + ".data") : 0;
      const auto lo = data.contains("min") ? as_int(data["min"], "min", where + ".data") : 0;
      const auto hi = data.contains("max") ? as_int(data["max"], "max", where + ".data") : 100;
      table.data = random_column_data(table.layout, static_cast<std::uint64_t>(seed), lo, hi);
    }
    if (t.contains("coalesce_gap")) table.coalesce_gap = as_bytes(t["coalesce_gap"], "coalesce_gap", where);
    s.table = std::move(table);
  }
  if (!s.fleet && !s.table) throw ValidationError("scan: needs a 'fleet' or 'table' block");
  return s;
}

JoinSection join_from_json(const nlohmann::json& j) {
  const std::string where = "join";
  reject_unknown_keys(j, {"workers", "build_bytes", "probe_bytes", "queries_per_day", "broadcast_fraction", "strategy",
                          "threshold_bytes", "request_bytes"},
                      where);
  JoinSection s;
  s.fleet.workers = detail::int_field(j, "workers", where);
  s.fleet.build_bytes = detail::bytes_field(j, "build_bytes", where);
  s.fleet.queries_per_day = detail::int_field(j, "queries_per_day", where);
  s.fleet.broadcast_fraction = as_factor(require(j, "broadcast_fraction", where), "broadcast_fraction", where);
  s.probe_bytes = detail::bytes_field_or(j, "probe_bytes", where, 0);
  if (j.contains("strategy")) s.strategy = parse_join_strategy(as_string(j["strategy"], "strategy", where));
  s.threshold_bytes = detail::bytes_field_or(j, "threshold_bytes", where, s.threshold_bytes);
  s.request_bytes = detail::bytes_field_or(j, "request_bytes", where, s.request_bytes);
  if (s.fleet.workers < 1) throw ValidationError("join: field 'workers' must be >= 1");
  if (s.fleet.broadcast_fraction.millionths() > DecimalFactor::kScale) {
    throw ValidationError("join: field 'broadcast_fraction' must be within [0, 1]");
  }
  if (s.request_bytes <= 0) throw ValidationError("join: field 'request_bytes' must be > 0");
  return s;
}

CacheConfig cache_from_json(const nlohmann::json& j) {
  const std::string where = "cache";
  reject_unknown_keys(j, {"capacity_bytes", "block_bytes", "fetch"}, where);
  const auto fetch = j.contains("fetch") ? parse_fetch_mode(as_string(j["fetch"], "fetch", where)) : FetchMode::Span;
  return CacheConfig(detail::bytes_field(j, "capacity_bytes", where),
                     detail::bytes_field_or(j, "block_bytes", where, kDefaultBlockBytes), fetch);
}

// Re-throws with the section name prefixed, keeping the error category.
template <typename Fn>
auto in_section(const std::string& section, Fn&& fn) {
  try {
    return fn();
  } catch (const OverflowError& e) {
    throw OverflowError("section '" + section + "': " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("section '" + section + "': " + e.what());
  } catch (const Error& e) {
    throw Error("section '" + section + "': " + e.what());
  }
}

RequestTally get_tally(std::int64_t requests, std::int64_t bytes) {
  RequestTally t;
  t.add(RequestKind::Get, requests, bytes);
  return t;
}

ComparisonSide priced_side(const PriceBook& book, std::string label, const RequestTally& tally) {
  return {std::move(label), tally.total_requests(), tally.total_bytes(), cost_of(book, tally)};
}

nlohmann::json side_json(const ComparisonSide& s) {
  return {{"label", s.label},
          {"requests", s.requests},
          {"bytes", s.bytes},
          {"cost_nanousd", s.cost.nano_usd},
          {"cost_usd", format_usd(s.cost)}};
}

ComparisonSide side_from_json(const nlohmann::json& j) {
  return {j.at("label").get<std::string>(), j.at("requests").get<std::int64_t>(), j.at("bytes").get<std::int64_t>(),
          Money{j.at("cost_nanousd").get<std::int64_t>()}};
}

std::string grouped(std::int64_t v) {
  std::string s = std::to_string(v < 0 ? -v : v);
  for (int pos = static_cast<int>(s.size()) - 3; pos > 0; pos -= 3) s.insert(static_cast<std::size_t>(pos), ",");
  return (v < 0 ? "-" : "") + s;
}

std::string signed_grouped(std::int64_t v) { return (v >= 0 ? "+" : "") + grouped(v); }

std::string percent_change(double a, double b) {
  if (a == 0.0) return b == 0.0 ? "0.00%" : "n/a";
  std::ostringstream out;
  const double pct = (b - a) / a * 100.0;
  out << std::fixed << std::setprecision(2) << (pct >= 0 ? "+" : "") << pct << "%";
  return out.str();
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j, const fs::path& base_dir, std::string name) {
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
  reject_unknown_keys(j, {"name", "price_book", "price_book_file", "workload", "scan", "join", "cache", "report"},
                      "scenario");
  if (j.contains("name")) name = as_string(j["name"], "name", "scenario");

  std::optional<PriceBook> book;
  if (j.contains("price_book") && j.contains("price_book_file")) {
    throw ValidationError("scenario: give only one of 'price_book' or 'price_book_file'");
  }
  if (j.contains("price_book")) {
    const auto id = as_string(j["price_book"], "price_book", "scenario");
    try {
      book = find_pricebook(id);
    } catch (const ValidationError&) {
      throw ValidationError("scenario: field 'price_book': unknown price book '" + id + "'");
    }
  } else if (j.contains("price_book_file")) {
    const auto path = resolve(base_dir, as_string(j["price_book_file"], "price_book_file", "scenario"));
    book = pricebook_from_json(read_json_file(path, "price_book_file"));
  } else {
    throw ValidationError("scenario: missing field 'price_book' (or 'price_book_file')");
  }

  Scenario s{std::move(name), *book, std::nullopt, std::nullopt, std::nullopt, std::nullopt, {}, j};
  if (j.contains("workload")) s.workload = workload_from_json(j["workload"], base_dir);
  if (j.contains("scan")) s.scan = scan_from_json(j["scan"], base_dir);
  if (j.contains("join")) s.join = join_from_json(j["join"]);
  if (j.contains("cache")) s.cache = cache_from_json(j["cache"]);
  if (j.contains("report")) {
    reject_unknown_keys(j["report"], {"annual"}, "report");
    s.report.annual = bool_or(j["report"], "annual", "report", false);
  }
  if (!s.scan && !s.join && !s.cache) throw ValidationError("scenario: needs at least one of 'scan', 'join', 'cache'");
  if (s.cache && !s.workload) throw ValidationError("scenario: section 'cache' requires field 'workload'");
  return s;
}

Scenario load_scenario(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ValidationError("scenario file '" + path.string() + "' does not exist");
  const auto j = read_json_file(path, "scenario");
  return scenario_from_json(j, path.parent_path(), path.stem().string());
}

CostReport run_scenario(const Scenario& s) {
  CostReport report;
  report.name = s.name;
  report.price_book = s.book.id();
  report.scenario = s.echo;
  report.annual = s.report.annual;
  const PriceBook& book = s.book;

  auto add_section = [&](std::string name, RequestTally tally, nlohmann::json detail) {
    const Money cost = cost_of(book, tally);
    report.sections.push_back({std::move(name), std::move(tally), cost, std::move(detail)});
  };

  if (s.scan && s.scan->fleet) {
    in_section("scan.fleet", [&] {
      const auto& f = *s.scan->fleet;
      const auto p = fleet_scan_projection(f.daily_bytes, f.avg_request_bytes, f.inflation, f.page_bytes);
      const auto pushdown = get_tally(p.pushdown_requests, p.pushdown_bytes);
      const auto full = get_tally(p.full_scan_requests, p.full_scan_bytes);
      auto detail = to_json(p);
      detail["pushdown"] = f.pushdown;
      add_section("scan.fleet", f.pushdown ? pushdown : full, detail);
      report.comparisons.push_back(
          {"scan.fleet", priced_side(book, "full_scan", full), priced_side(book, "pushdown", pushdown)});
    });
  }

  if (s.scan && s.scan->table) {
    in_section("scan.table", [&] {
      const auto& t = *s.scan->table;
      auto finish = [&](bool pushdown) {
        auto plan = plan_scan(t.layout, t.data, t.query.select, t.query.where, pushdown);
        return t.coalesce_gap ? coalesce_requests(plan, *t.coalesce_gap) : plan;
      };
      const auto chosen = finish(t.query.pushdown);
      const auto pushdown = t.query.pushdown ? chosen : finish(true);
      const auto full = t.query.pushdown ? finish(false) : chosen;
      nlohmann::json detail = {{"table", t.layout.table()},
                               {"pushdown", t.query.pushdown},
                               {"survivors", chosen.survivors.size()},
                               {"coalesce_gap", t.coalesce_gap ? nlohmann::json(*t.coalesce_gap) : nlohmann::json()}};
      add_section("scan.table", chosen.tally(), detail);
      report.comparisons.push_back(
          {"scan.table", priced_side(book, "full_scan", full.tally()), priced_side(book, "pushdown", pushdown.tally())});
    });
  }

  if (s.join) {
    in_section("join.fleet", [&] {
      const auto& j = *s.join;
      const auto chosen = fleet_join_io(j.fleet, j.probe_bytes, j.strategy, j.threshold_bytes, j.request_bytes);
      const auto broadcast =
          fleet_join_io(j.fleet, j.probe_bytes, JoinStrategy::Broadcast, j.threshold_bytes, j.request_bytes);
      const auto shuffle =
          fleet_join_io(j.fleet, j.probe_bytes, JoinStrategy::Shuffle, j.threshold_bytes, j.request_bytes);
      auto detail = to_json(chosen);
      detail["waste_fraction"] = waste_fraction(j.fleet.workers).to_string(4);
      detail["fleet_aggregate_bytes"] = fleet_aggregate(j.fleet);
      add_section("join.fleet", get_tally(chosen.storage_requests, chosen.storage_bytes), detail);
      report.comparisons.push_back(
          {"join.fleet", priced_side(book, "shuffle", get_tally(shuffle.storage_requests, shuffle.storage_bytes)),
           priced_side(book, "broadcast", get_tally(broadcast.storage_requests, broadcast.storage_bytes))});
    });
  }

  if (s.workload) {
    const Trace trace = in_section("workload", [&] {
      const auto& w = *s.workload;
      if (w.trace_file) return load_trace_file(w.trace_file->string());
      report.seed = w.seed;
      return synthesize_trace(*w.synthesis, w.seed);
    });
    in_section("workload", [&] {
      nlohmann::json stats = {{"records", trace.size()}};
      const auto direct = no_cache_tally(trace);
      stats["get_requests"] = direct.total_requests();
      if (!direct.empty()) {
        const auto cdf = size_cdf(trace);
        stats["p50_bytes"] = quantile(cdf, 0.5);
        stats["p90_bytes"] = quantile(cdf, 0.9);
        stats["top_10000_block_share"] = popularity_share(trace, kDefaultBlockBytes, 10'000);
      }
      report.workload = stats;
    });

    if (s.cache) {
      in_section("cache", [&] {
        const auto cache = simulate(trace, *s.cache);
        auto detail = to_json(cache);
        detail["capacity_bytes"] = s.cache->capacity_bytes();
        detail["block_bytes"] = s.cache->block_bytes();
        detail["fetch"] = std::string(to_string(s.cache->fetch()));
        add_section("cache", cache.origin_tally(), detail);
        report.comparisons.push_back({"cache", priced_side(book, "no_cache", no_cache_tally(trace)),
                                      priced_side(book, "cache", cache.origin_tally())});
      });
    }
  }

  for (const auto& section : report.sections) report.grand_total = report.grand_total + section.cost;
  if (report.annual) {
    report.annual_total = Money{checked_mul(report.grand_total.nano_usd, kDaysPerYear, "annual total")};
  }
  return report;
}

nlohmann::json to_json(const CostReport& r) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& s : r.sections) {
    sections.push_back({{"name", s.name},
                        {"requests", s.requests()},
                        {"bytes", s.bytes()},
                        {"cost_nanousd", s.cost.nano_usd},
                        {"cost_usd", format_usd(s.cost)},
                        {"tally", to_json(s.tally)},
                        {"detail", s.detail}});
  }
  nlohmann::json comparisons = nlohmann::json::array();
  for (const auto& c : r.comparisons) {
    comparisons.push_back({{"name", c.name}, {"baseline", side_json(c.baseline)}, {"alternative", side_json(c.alternative)}});
  }
  nlohmann::json j = {{"name", r.name},
                      {"price_book", r.price_book},
                      {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json()},
                      {"scenario", r.scenario},
                      {"workload", r.workload},
                      {"sections", sections},
                      {"comparisons", comparisons},
                      {"grand_total_nanousd", r.grand_total.nano_usd},
                      {"grand_total_usd", format_usd(r.grand_total)},
                      {"annual", r.annual}};
  if (r.annual_total) {
    j["annual_total_nanousd"] = r.annual_total->nano_usd;
    j["annual_total_usd"] = format_usd(*r.annual_total);
  }
  return j;
}

CostReport report_from_json(const nlohmann::json& j) {
  try {
    CostReport r;
    r.name = j.at("name").get<std::string>();
    r.price_book = j.at("price_book").get<std::string>();
    if (!j.at("seed").is_null()) r.seed = j["seed"].get<std::uint64_t>();
    r.scenario = j.at("scenario");
    r.workload = j.at("workload");
    for (const auto& s : j.at("sections")) {
      r.sections.push_back({s.at("name").get<std::string>(), tally_from_json(s.at("tally")),
                            Money{s.at("cost_nanousd").get<std::int64_t>()}, s.at("detail")});
    }
    for (const auto& c : j.at("comparisons")) {
      r.comparisons.push_back(
          {c.at("name").get<std::string>(), side_from_json(c.at("baseline")), side_from_json(c.at("alternative"))});
    }
    r.grand_total = Money{j.at("grand_total_nanousd").get<std::int64_t>()};
    r.annual = j.at("annual").get<bool>();
    if (j.contains("annual_total_nanousd")) r.annual_total = Money{j["annual_total_nanousd"].get<std::int64_t>()};
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed cost report: ") + e.what());
  }
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "table") return ReportFormat::Table;
  throw ValidationError("unknown report format '" + std::string(text) + "'");
}

std::string render_report(const CostReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";

  std::ostringstream out;
  out << "scenario: " << r.name << "    price book: " << r.price_book;
  if (r.seed) out << "    seed: " << *r.seed;
  out << "\n\n";
  out << std::left << std::setw(14) << "section" << std::right << std::setw(26) << "requests" << std::setw(30)
      << "bytes" << std::setw(22) << "cost" << "\n";
  for (const auto& s : r.sections) {
    out << std::left << std::setw(14) << s.name << std::right << std::setw(26) << grouped(s.requests())
        << std::setw(30) << grouped(s.bytes()) << std::setw(22) << format_usd_grouped(s.cost) << "\n";
  }
  out << std::left << std::setw(14) << "total" << std::right << std::setw(78) << format_usd_grouped(r.grand_total)
      << "\n";
  if (r.annual_total) {
    out << std::left << std::setw(14) << "annual (x365)" << std::right << std::setw(78)
        << format_usd_grouped(*r.annual_total) << "\n";
  }
  if (!r.comparisons.empty()) {
    out << "\ncomparisons:\n";
    for (const auto& c : r.comparisons) {
      out << "  " << c.name << ": " << c.baseline.label << " -> " << c.alternative.label << "\n";
      out << "    requests  " << grouped(c.baseline.requests) << " -> " << grouped(c.alternative.requests) << " ("
          << percent_change(static_cast<double>(c.baseline.requests), static_cast<double>(c.alternative.requests))
          << ")\n";
      out << "    bytes     " << grouped(c.baseline.bytes) << " -> " << grouped(c.alternative.bytes) << " ("
          << percent_change(static_cast<double>(c.baseline.bytes), static_cast<double>(c.alternative.bytes)) << ")\n";
      out << "    cost      " << format_usd_grouped(c.baseline.cost) << " -> " << format_usd_grouped(c.alternative.cost)
          << " ("
          << percent_change(static_cast<double>(c.baseline.cost.nano_usd),
                            static_cast<double>(c.alternative.cost.nano_usd))
          << ")\n";
    }
  }
  return out.str();
}

std::string compare(const CostReport& a, const CostReport& b) {
  if (a.price_book != b.price_book) {
    throw ValidationError("cannot compare reports priced with '" + a.price_book + "' and '" + b.price_book + "'");
  }
  std::ostringstream out;
  out << "compare: " << a.name << " -> " << b.name << "    price book: " << a.price_book << "\n\n";
  out << std::left << std::setw(14) << "section" << std::setw(10) << "metric" << std::right << std::setw(26)
      << "baseline" << std::setw(26) << "alternative" << std::setw(26) << "delta" << std::setw(14) << "change"
      << "\n";

  auto row = [&](const std::string& section, const std::string& metric, std::int64_t x, std::int64_t y,
                 bool money) {
    const auto fmt = [&](std::int64_t v) { return money ? format_usd_grouped(Money{v}) : grouped(v); };
    const std::int64_t delta = y - x;
    const std::string delta_text =
        money ? (delta >= 0 ? "+" : "") + format_usd_grouped(Money{delta}) : signed_grouped(delta);
    out << std::left << std::setw(14) << section << std::setw(10) << metric << std::right << std::setw(26) << fmt(x)
        << std::setw(26) << fmt(y) << std::setw(26) << delta_text << std::setw(14)
        << percent_change(static_cast<double>(x), static_cast<double>(y)) << "\n";
  };

  std::vector<std::string> names;
  for (const auto& s : a.sections) names.push_back(s.name);
  for (const auto& s : b.sections) {
    if (std::find(names.begin(), names.end(), s.name) == names.end()) names.push_back(s.name);
  }
  auto find = [](const CostReport& r, const std::string& name) -> const SectionCost* {
    for (const auto& s : r.sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  };
  for (const auto& name : names) {
    const auto* x = find(a, name);
    const auto* y = find(b, name);
    row(name, "requests", x ? x->requests() : 0, y ? y->requests() : 0, false);
    row("", "bytes", x ? x->bytes() : 0, y ? y->bytes() : 0, false);
    row("", "cost", x ? x->cost.nano_usd : 0, y ? y->cost.nano_usd : 0, true);
  }
  row("total", "cost", a.grand_total.nano_usd, b.grand_total.nano_usd, true);
  return out.str();
}

}  // namespace iocost
