#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "evq/experiment.hpp"

using namespace evq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("evq_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json small_sc1() {
  return Json::parse(R"({"problem": "sc1", "sizes": [5], "k": 2, "p_max": 2, "seeds": {"first": 1, "count": 3},
                         "record_count": 200, "baseline_trials": 200, "shots": 100})");
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(EVQ_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesAndRoundTrips) {
  const auto c = parse_config(small_sc1());
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(c.p_max, 2);
  const auto again = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(again).dump(), config_to_json(c).dump());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  auto j = small_sc1();
  j["p_maxx"] = 3;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = small_sc1();
  j["optimizer"] = Json{{"stratgy", "egg"}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j = small_sc1();
  j["p_max"] = 0;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = small_sc1();
  j["sizes"] = "five";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = small_sc1();
  j["problem"] = "tsp";
  EXPECT_THROW(parse_config(j), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"problem": "sc2", "groups": [3]})")), ConfigError);
}

TEST(Experiment, RecordsRatiosPerDepthWithinBounds) {
  const auto dir = scratch("run");
  const auto out = run_experiment(parse_config(small_sc1()), dir, 2);
  EXPECT_EQ(out.failed, 0U);
  const auto& recs = out.report["records"];
  ASSERT_EQ(recs.size(), 3U);
  for (const auto& r : recs) {
    ASSERT_EQ(r["qaoa"]["per_layer_trace"].size(), 2U);
    for (const auto& l : r["qaoa"]["per_layer_trace"]) EXPECT_LE(l["ratio"].get<double>(), 1.0 + 1e-9);
    EXPECT_TRUE(r.contains("timing"));
  }
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  const auto csv = slurp(dir / "curves.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 2);
}

TEST(Experiment, AggregatesAreRecomputableFromRecords) {
  const auto dir = scratch("agg");
  const auto out = run_experiment(parse_config(small_sc1()), dir);
  for (const auto& d : out.report["aggregate"]["depths"]) {
    const int depth = d["depth"].get<int>();
    std::vector<double> v;
    for (const auto& r : out.report["records"]) v.push_back(r["qaoa"]["per_layer_trace"][depth - 1]["ratio"].get<double>());
    EXPECT_DOUBLE_EQ(d["median"].get<double>(), quantile(v, 0.5));
    EXPECT_DOUBLE_EQ(d["q25"].get<double>(), quantile(v, 0.25));
    EXPECT_EQ(d["distribution"].get<std::vector<double>>(), v);
  }
}

TEST(Experiment, RerunIsIdenticalApartFromTiming) {
  const auto c = parse_config(small_sc1());
  const auto a = run_experiment(c, scratch("det_a"), 1);
  const auto b = run_experiment(c, scratch("det_b"), 3);
  EXPECT_EQ(strip_timing(a.report).dump(), strip_timing(b.report).dump());
  EXPECT_EQ(a.report["provenance"]["config_hash"], b.report["provenance"]["config_hash"]);
}

TEST(Experiment, ConfigHashIgnoresOutputDirectory) {
  auto j = small_sc1();
  const auto base = provenance(parse_config(j))["config_hash"];
  j["output"] = "elsewhere";
  EXPECT_EQ(provenance(parse_config(j))["config_hash"], base);
  j["p_max"] = 3;
  EXPECT_NE(provenance(parse_config(j))["config_hash"], base);
}

TEST(Experiment, FailingInstancesAreRecordedAndTheRunContinues) {
  auto j = small_sc1();
  j["sizes"] = Json::array({5, 300});  // 300 loads exceed the 200 records
  const auto out = run_experiment(parse_config(j), scratch("failsoft"));
  EXPECT_EQ(out.failed, 3U);
  int ok = 0, failed = 0;
  for (const auto& r : out.report["records"]) {
    if (r["status"] == "ok") ++ok;
    else {
      ++failed;
      EXPECT_FALSE(r["error"].get<std::string>().empty());
    }
  }
  EXPECT_EQ(ok, 3);
  EXPECT_EQ(failed, 3);
  EXPECT_EQ(out.report["aggregate"]["depths"][0]["count"], 3);
}

TEST(Experiment, Sc2RunReportsMisRatios) {
  const auto j = Json::parse(R"({"problem": "sc2", "groups": [3, 2], "p_max": 2, "seeds": [1, 2], "record_count": 200})");
  const auto out = run_experiment(parse_config(j), scratch("sc2"));
  EXPECT_EQ(out.failed, 0U);
  for (const auto& r : out.report["records"]) {
    EXPECT_GT(r["optimum"].get<int>(), 0);
    EXPECT_LE(r["qaoa"]["ratio"].get<double>(), 1.0 + 1e-9);
    EXPECT_GT(r["qaoa"]["ratio"].get<double>(), r["baseline"]["mean_ratio"].get<double>());
  }
}

TEST(Experiment, Sc1BeyondEnumerationUsesScheduleDuality) {
  const auto recs = synthetic_records(200, 0);
  ExperimentConfig c;
  c.k = 2;
  InstanceData d = make_instance(c, {"x", 8, 3}, recs);
  const double brute = maxkcut_optimum(d, 2);
  EXPECT_DOUBLE_EQ(brute, brute_maxkcut(d.weighted, 2).value);
  // Same quantity through the dynamic programme.
  std::int64_t swt = 0;
  for (const auto& j : d.sc1->jobs) swt += j.weight * j.duration;
  EXPECT_DOUBLE_EQ(brute, static_cast<double>(swt) + d.weighted.total_weight() - static_cast<double>(dp_optimum(*d.sc1)));
  c.k = 3;
  InstanceData big = make_instance(c, {"y", 14, 3}, recs);  // 3^14 > cap
  EXPECT_GT(maxkcut_optimum(big, 3), 0.0);
}

TEST(Pipelines, LandscapeEmbedExportWriteNamedFiles) {
  const auto dir = scratch("files");
  auto j = small_sc1();
  j["landscape"] = Json{{"resolution", 6}, {"scales", {1.0}}};
  const auto c = parse_config(j);
  EXPECT_EQ(run_landscapes(c, dir).failed, 0U);
  EXPECT_TRUE(fs::exists(dir / "landscape_sc1_n5_s1.csv"));
  const auto s = parse_config(Json::parse(R"({"problem": "sc2", "groups": [3, 2], "seeds": [4], "record_count": 200})"));
  run_embeddings(s, dir);
  EXPECT_TRUE(fs::exists(dir / "layout_sc2_g3x2_s4.json"));
  EXPECT_EQ(run_export_models(s, dir).failed, 0U);
  EXPECT_TRUE(fs::exists(dir / "model_sc2_g3x2_s4.lp"));
  EXPECT_EQ(run_baselines(c, dir).failed, 0U);
  EXPECT_EQ(run_generate(s, dir).failed, 0U);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  {
    std::ofstream(dir / "good.json") << small_sc1().dump();
    auto bad = small_sc1();
    bad["typo"] = 1;
    std::ofstream(dir / "bad.json") << bad.dump();
    auto partial = small_sc1();
    partial["sizes"] = Json::array({5, 300});
    partial["p_max"] = 1;
    std::ofstream(dir / "partial.json") << partial.dump();
  }
  const std::string out = " --out " + (dir / "out").string();
  EXPECT_EQ(run_cli("run --config " + (dir / "good.json").string() + out + " --seed 2"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.json").string() + out), 1);
  EXPECT_EQ(run_cli("run --config " + (dir / "partial.json").string() + out), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string() + out), 1);
  EXPECT_EQ(run_cli("resources --sizes 5 6" + out), 0);
  EXPECT_NE(slurp(dir / "out" / "resources.json").find("\"cnot_count\": 68"), std::string::npos);
  EXPECT_EQ(run_cli("spectrum --sizes 4" + out), 0);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}
