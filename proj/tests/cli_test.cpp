#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kData = IOCOST_TEST_DATA_DIR;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; `args` is passed to the shell as-is.
Result run(const std::string& args) {
  const std::string cmd = std::string(IOCOST_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args) {
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << args;
  return json::parse(r.out);
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("iocost_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

TEST(Cli, Books) {
  const auto j = run_json("books");
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 6u);
}

TEST(Cli, PriceTally) {
  const auto j = run_json("price --book s3-standard --tally " + kData + "/tally.json");
  // 1000 GET at 400 + 1010 write-class at 5000.
  EXPECT_EQ(j["cost_nanousd"], 400'000 + 1010 * 5000);
  EXPECT_EQ(j["kinds"]["put"]["class"], "write");
  const auto custom = run_json("price --book-file " + kData + "/pricebook_custom.json --tally " + kData + "/tally.json");
  EXPECT_EQ(custom["book"], "custom-flat");
  EXPECT_EQ(custom["cost_nanousd"], 1000 * 1000 + 1010 * 10000);
}

TEST(Cli, JoinFleetFlags) {
  const auto j = run_json(
      "join --workers 200 --build-bytes 100MB --probe-bytes 0 --queries 500000 --broadcast-frac 0.20 "
      "--request-bytes 10KB --strategy broadcast");
  EXPECT_EQ(j["fleet_aggregate_bytes"], 2'000'000'000'000'000);
  EXPECT_EQ(j["daily"]["storage_requests"], 200'000'000'000);
  EXPECT_EQ(j["daily"]["cost_usd"], "80000");
  EXPECT_EQ(j["waste_fraction"], "0.9950");
  EXPECT_EQ(j["per_query"]["storage_bytes"], 20'000'000'000);
}

TEST(Cli, ScanFilter8) {
  const std::string base = "scan --layout " + kData + "/filter8_layout.json --query " + kData + "/filter8_query.json --data " +
                           kData + "/filter8_values.json";
  const auto j = run_json(base);
  EXPECT_EQ(j["request_count"], 11);
  EXPECT_EQ(j["survivors"], json::array({1, 4, 6}));
  EXPECT_FALSE(j.contains("requests"));
  const auto shown = run_json(base + " --show-requests");
  EXPECT_EQ(shown["requests"].size(), 11u);
  const auto merged = run_json(base + " --coalesce-gap 0");
  EXPECT_LT(merged["request_count"].get<int>(), 11);
}

TEST(Cli, CacheSampleTrace) {
  const auto j = run_json("cache --trace " + kData + "/sample_trace.jsonl --capacity 10MB --book azure-gpv2-hot");
  EXPECT_EQ(j["hits"], 3);
  EXPECT_EQ(j["origin_requests"], 2);
  EXPECT_EQ(j["cost_nanousd"], 1000);
  const auto curve = run_json("cache --trace " + kData + "/sample_trace.jsonl --capacity 10MB --curve 0,1MB,10MB");
  ASSERT_EQ(curve["curve"].size(), 3u);
  EXPECT_EQ(curve["curve"][0]["hit_ratio"], 0.0);
}

TEST(Cli, SynthIsDeterministic) {
  TempDir dir;
  const auto a = run_json("synth --records 2000 --seed 11 --out " + dir.file("a.jsonl"));
  run_json("synth --records 2000 --seed 11 --out " + dir.file("b.jsonl"));
  EXPECT_EQ(a["records"], 2000);
  std::ifstream fa(dir.file("a.jsonl"));
  std::ifstream fb(dir.file("b.jsonl"));
  const std::string ta((std::istreambuf_iterator<char>(fa)), {});
  const std::string tb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
  const auto c = run_json("cache --trace " + dir.file("a.jsonl") + " --capacity 1GB");
  EXPECT_EQ(c["requests"], 2000);
}

TEST(Cli, ScenarioRunAndCompare) {
  const auto a = run("scenario run " + kData + "/fleet_broadcast.json");
  const auto b = run("scenario run " + kData + "/fleet_broadcast.json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["grand_total_nanousd"], 80'000'000'000'000);

  const auto table = run("scenario run " + kData + "/fleet_broadcast.json --format table --annual");
  EXPECT_NE(table.out.find("$80,000"), std::string::npos);
  EXPECT_NE(table.out.find("$29,200,000"), std::string::npos);

  TempDir dir;
  {
    std::ofstream(dir.file("report.json")) << run("scenario run " + kData + "/fleet_scan_full.json").out;
  }
  const auto cmp = run("scenario compare " + dir.file("report.json") + " " + kData + "/fleet_scan_pushdown.json");
  EXPECT_EQ(cmp.code, 0);
  EXPECT_NE(cmp.out.find("+1900.00%"), std::string::npos) << cmp.out;
}

TEST(Cli, ValidationErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("join --workers 2").code, 2);
  EXPECT_EQ(run("price --book nope --tally " + kData + "/tally.json").code, 2);
  EXPECT_EQ(run("join --workers 2 --build-bytes 1QB --request-bytes 1KB").code, 2);
  EXPECT_EQ(run("join --workers 0 --build-bytes 1MB --request-bytes 1KB").code, 2);
  EXPECT_EQ(run("cache --trace " + kData + "/missing.jsonl --capacity 1MB").code, 2);
  EXPECT_EQ(run("cache --trace " + kData + "/tally.json --capacity 1MB").code, 2);
  EXPECT_EQ(run("scenario run " + kData + "/absent.json").code, 2);
  EXPECT_EQ(run("scenario run " + kData + "/fleet_broadcast.json --format xml").code, 2);
  EXPECT_EQ(run("scenario compare " + kData + "/fleet_broadcast.json " + kData + "/cache_trace.json").code, 2);
}

TEST(Cli, OverflowExitsThree) {
  EXPECT_EQ(run("join --workers 1000000 --build-bytes 10PB --request-bytes 1KB").code, 3);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

}  // namespace
