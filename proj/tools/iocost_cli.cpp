// iocost: price the object-store API traffic of analytics I/O patterns.
//
// Exit codes: 0 success, 2 validation error, 3 runtime or overflow error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iocost/cachesim.hpp"
#include "iocost/columnar.hpp"
#include "iocost/errors.hpp"
#include "iocost/joinplan.hpp"
#include "iocost/pricing.hpp"
#include "iocost/scenario.hpp"
#include "iocost/trace.hpp"

namespace {

using iocost::parse_bytes;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw iocost::ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw iocost::ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

iocost::PriceBook resolve_book(const std::string& id, const std::string& file) {
  return file.empty() ? iocost::find_pricebook(id) : iocost::load_pricebook_file(file);
}

json money_fields(iocost::Money m) { return {{"cost_nanousd", m.nano_usd}, {"cost_usd", iocost::format_usd(m)}}; }

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

iocost::CostReport report_for(const std::string& path) {
  const json j = read_json(path);
  if (j.is_object() && j.contains("sections")) return iocost::report_from_json(j);
  return iocost::run_scenario(iocost::load_scenario(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-store API cost simulator for analytics I/O"};
  app.require_subcommand(1);

  std::string book_id = "s3-standard";
  std::string book_file;
  auto add_book = [&](CLI::App* cmd) {
    cmd->add_option("--book", book_id, "Built-in price book id")->capture_default_str();
    cmd->add_option("--book-file", book_file, "Price book JSON file (overrides --book)");
  };

  // price
  auto* price = app.add_subcommand("price", "Price a request tally");
  std::string tally_file;
  add_book(price);
  price->add_option("--tally", tally_file, "Tally JSON file")->required();
  auto* books = app.add_subcommand("books", "List the built-in price books");

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a JSONL access trace");
  iocost::SynthesisSpec spec;
  std::uint64_t seed = 0;
  std::string out_file;
  std::string p50;
  std::string p90;
  synth->add_option("--records", spec.records, "Record count")->required();
  synth->add_option("--seed", seed, "Generator seed")->required();
  synth->add_option("--out", out_file, "Output JSONL file")->required();
  synth->add_option("--p50", p50, "Median request size, e.g. 10KB");
  synth->add_option("--p90", p90, "90th percentile request size, e.g. 1MB");
  synth->add_option("--universe", spec.universe, "Distinct objects")->capture_default_str();
  synth->add_option("--zipf-exponent", spec.zipf_exponent, "Popularity skew")->capture_default_str();
  synth->add_option("--duration-ms", spec.duration_ms, "Trace duration")->capture_default_str();

  // scan
  auto* scan = app.add_subcommand("scan", "Plan a columnar scan and price its ranged reads");
  std::string layout_file;
  std::string query_file;
  std::string data_file;
  std::string coalesce_gap;
  std::uint64_t data_seed = 0;
  bool show_requests = false;
  add_book(scan);
  scan->add_option("--layout", layout_file, "Layout JSON file")->required();
  scan->add_option("--query", query_file, "Query JSON file")->required();
  scan->add_option("--data", data_file, "Column values JSON {name: [int...]}; random if absent");
  scan->add_option("--data-seed", data_seed, "Seed for random column values (0..100)")->capture_default_str();
  scan->add_option("--coalesce-gap", coalesce_gap, "Merge requests separated by at most this many bytes");
  scan->add_flag("--show-requests", show_requests, "Include every ranged request in the output");

  // join
  auto* join = app.add_subcommand("join", "Storage I/O of broadcast vs. shuffle joins");
  std::int64_t workers = 0;
  std::string build_bytes;
  std::string probe_bytes = "0";
  std::int64_t queries = 1;
  std::string broadcast_frac = "1";
  std::string request_bytes;
  std::string strategy = "auto";
  std::string threshold = "100MB";
  add_book(join);
  join->add_option("--workers", workers, "Workers per cluster")->required();
  join->add_option("--build-bytes", build_bytes, "Build table size")->required();
  join->add_option("--probe-bytes", probe_bytes, "Probe table size")->capture_default_str();
  join->add_option("--queries", queries, "Queries per day")->capture_default_str();
  join->add_option("--broadcast-frac", broadcast_frac, "Fraction of queries that join")->capture_default_str();
  join->add_option("--request-bytes", request_bytes, "Bytes per storage request")->required();
  join->add_option("--strategy", strategy, "broadcast | shuffle | auto")->capture_default_str();
  join->add_option("--threshold", threshold, "Auto broadcast threshold")->capture_default_str();

  // cache
  auto* cache = app.add_subcommand("cache", "Replay a trace through a block cache");
  std::string trace_file;
  std::string capacity;
  std::string block = "1MB";
  std::string fetch = "span";
  std::vector<std::string> curve;
  add_book(cache);
  cache->add_option("--trace", trace_file, "JSONL trace file")->required();
  cache->add_option("--capacity", capacity, "Cache capacity")->required();
  cache->add_option("--block", block, "Block size")->capture_default_str();
  cache->add_option("--fetch", fetch, "span | per-run")->capture_default_str();
  cache->add_option("--curve", curve, "Extra capacities for a hit-ratio curve")->delimiter(',');

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Run or compare scenario files");
  scenario->require_subcommand(1);
  auto* run = scenario->add_subcommand("run", "Run a scenario and print its cost report");
  std::string scenario_file;
  std::string format = "json";
  bool annual = false;
  run->add_option("file", scenario_file, "Scenario JSON")->required();
  run->add_option("--format", format, "json | table")->capture_default_str();
  run->add_flag("--annual", annual, "Add a x365 annual total");
  auto* cmp = scenario->add_subcommand("compare", "Compare two scenarios or saved reports");
  std::string baseline_file;
  std::string alternative_file;
  cmp->add_option("baseline", baseline_file, "Scenario or report JSON")->required();
  cmp->add_option("alternative", alternative_file, "Scenario or report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*price) {
      const auto book = resolve_book(book_id, book_file);
      const auto tally = iocost::tally_from_json(read_json(tally_file));
      json kinds = json::object();
      for (const auto& [kind, t] : tally.entries()) {
        const auto& cls = book.classify(kind);
        kinds[std::string(iocost::to_string(kind))] = {
            {"count", t.count},
            {"bytes", t.bytes},
            {"class", std::string(iocost::to_string(cls.billing))},
            {"nanousd_per_request", cls.nano_usd_per_request}};
      }
      json out = money_fields(iocost::cost_of(book, tally));
      out["book"] = book.id();
      out["kinds"] = kinds;
      print(out);
    } else if (*books) {
      json out = json::array();
      for (const auto& b : iocost::builtin_pricebooks()) out.push_back(iocost::to_json(b));
      print(out);
    } else if (*synth) {
      if (!p50.empty()) spec.anchors[0].size = parse_bytes(p50);
      if (!p90.empty()) spec.anchors[1].size = parse_bytes(p90);
      const auto trace = iocost::synthesize_trace(spec, seed);
      std::ofstream out(out_file);
      if (!out) throw iocost::Error("cannot write '" + out_file + "'");
      iocost::write_trace(out, trace);
      const auto cdf = iocost::size_cdf(trace);
      print({{"records", trace.size()},
             {"seed", seed},
             {"out", out_file},
             {"p50_bytes", iocost::quantile(cdf, 0.5)},
             {"p90_bytes", iocost::quantile(cdf, 0.9)}});
    } else if (*scan) {
      const auto book = resolve_book(book_id, book_file);
      const auto layout = iocost::layout_from_json(read_json(layout_file));
      const auto query = iocost::query_from_json(read_json(query_file));
      iocost::ColumnData data;
      if (data_file.empty()) {
        data = iocost::random_column_data(layout, data_seed, 0, 100);
      } else {
        data = iocost::column_data_from_json(read_json(data_file));
        data.check_against(layout);
      }
      auto plan = iocost::plan_scan(layout, data, query);
      if (!coalesce_gap.empty()) plan = iocost::coalesce_requests(plan, parse_bytes(coalesce_gap));
      json out = iocost::to_json(plan);
      if (!show_requests) out.erase("requests");
      out["pushdown"] = query.pushdown;
      out.update(money_fields(iocost::cost_of(book, plan.tally())));
      print(out);
    } else if (*join) {
      const auto book = resolve_book(book_id, book_file);
      iocost::FleetParams fleet{queries, iocost::DecimalFactor::parse(broadcast_frac), workers, parse_bytes(build_bytes)};
      const auto req_bytes = parse_bytes(request_bytes);
      const auto strat = iocost::parse_join_strategy(strategy);
      const auto per_query = iocost::plan_join(
          {fleet.build_bytes, parse_bytes(probe_bytes), workers, strat, parse_bytes(threshold)}, req_bytes);
      const auto daily =
          iocost::fleet_join_io(fleet, parse_bytes(probe_bytes), strat, parse_bytes(threshold), req_bytes);
      iocost::RequestTally tally;
      tally.add(iocost::RequestKind::Get, daily.storage_requests, daily.storage_bytes);
      json out = {{"per_query", iocost::to_json(per_query)},
                  {"daily", iocost::to_json(daily)},
                  {"fleet_aggregate_bytes", iocost::fleet_aggregate(fleet)},
                  {"waste_fraction", iocost::waste_fraction(workers).to_string(4)},
                  {"book", book.id()}};
      out["daily"].update(money_fields(iocost::cost_of(book, tally)));
      print(out);
    } else if (*cache) {
      const auto book = resolve_book(book_id, book_file);
      const auto trace = iocost::load_trace_file(trace_file);
      const iocost::CacheConfig config(parse_bytes(capacity), parse_bytes(block), iocost::parse_fetch_mode(fetch));
      if (config.rounded_down()) {
        std::cerr << "note: capacity rounded down to " << config.capacity_bytes() << " bytes (whole blocks)\n";
      }
      const auto report = iocost::simulate(trace, config);
      json out = iocost::to_json(report);
      out.update(money_fields(iocost::price_origin(report, book)));
      if (!curve.empty()) {
        std::vector<std::int64_t> caps;
        for (const auto& c : curve) caps.push_back(parse_bytes(c));
        json points = json::array();
        for (const auto& p : iocost::miss_ratio_curve(trace, config, caps)) {
          points.push_back({{"capacity_bytes", p.capacity_bytes}, {"hit_ratio", p.hit_ratio}});
        }
        out["curve"] = points;
      }
      print(out);
    } else if (*run) {
      auto s = iocost::load_scenario(scenario_file);
      if (annual) s.report.annual = true;
      std::cout << iocost::render_report(iocost::run_scenario(s), iocost::parse_report_format(format));
    } else if (*cmp) {
      std::cout << iocost::compare(report_for(baseline_file), report_for(alternative_file));
    }
  } catch (const iocost::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
