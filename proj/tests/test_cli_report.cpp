// Copyright 2026 The PlayoutSim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "playoutsim/cli_report.hpp"
#include "test_util.hpp"

using namespace playoutsim;
using playoutsim_tests::TempDir;
using playoutsim_tests::read_file;

namespace {

ReportTable sample_table() {
  ReportTable table;
  table.caption = "Comparison (stable)";
  table.trace_label = "stable";
  ReportRow row;
  row.algorithm = "exp-avg";
  row.metrics.avg_playout_delay_ms = 52.834567;
  row.metrics.loss_pct = 3.21499;
  row.metrics.r_factor = 60.6;
  row.metrics.mos = 3.13111;
  row.metrics.played_count = 9679;
  row.metrics.lost_count = 321;
  table.rows.push_back(row);
  return table;
}

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("markdown report uses the comparison column set and 2-decimal values") {
  const std::string md = render_markdown(sample_table());
  CHECK(md.find("| Algorithm Used | Average Packet Delay (ms) | "
                "Loss Percentage (%) | Mean Opinion Score (MOS) |") !=
        std::string::npos);
  CHECK(md.find("| exp-avg | 52.83 | 3.21 | 3.13 |") != std::string::npos);
  CHECK(md.find("### Comparison (stable)") != std::string::npos);
}

TEST_CASE("markdown report lists failed rows") {
  ReportTable table = sample_table();
  ReportRow failed;
  failed.algorithm = "broken";
  failed.error = "unknown algorithm id 'broken'";
  table.rows.push_back(failed);
  const std::string md = render_markdown(table);
  CHECK(md.find("| broken | - | - | - |") != std::string::npos);
  CHECK(md.find("failed broken: unknown algorithm id") != std::string::npos);
}

TEST_CASE("csv report carries full precision") {
  const std::string csv = render_csv(sample_table());
  CHECK(csv.find("algorithm,avg_playout_delay_ms,loss_pct,r_factor,mos,"
                 "played_count,lost_count,error") == 0);
  char expected[64];
  std::snprintf(expected, sizeof(expected), "%.17g", 52.834567);
  CHECK(csv.find(expected) != std::string::npos);
  std::snprintf(expected, sizeof(expected), "%.17g", 3.21499);
  CHECK(csv.find(expected) != std::string::npos);
}

TEST_CASE("json report mirrors the table") {
  const auto doc = render_json(sample_table());
  CHECK(doc["caption"] == "Comparison (stable)");
  CHECK(doc["trace"] == "stable");
  CHECK(doc["rows"][0]["algorithm"] == "exp-avg");
  CHECK(doc["rows"][0]["played_count"] == 9679);
}

TEST_CASE("report format names") {
  CHECK(parse_report_format("markdown-table") == ReportFormat::kMarkdownTable);
  CHECK(parse_report_format("markdown") == ReportFormat::kMarkdownTable);
  CHECK(parse_report_format("md") == ReportFormat::kMarkdownTable);
  CHECK(parse_report_format("csv") == ReportFormat::kCsv);
  CHECK(parse_report_format("json") == ReportFormat::kJson);
  CHECK_THROWS_AS(parse_report_format("yaml"), std::runtime_error);
}

TEST_CASE("gen writes the trace and a summary, deterministically") {
  TempDir dir;
  GenOptions options;
  options.profile_name = "stable";
  options.n_packets = 10000;
  options.seed = 42;
  options.out_path = dir.path / "a.csv";
  std::ostringstream out, err;
  CHECK(cmd_gen(options, out, err) == 0);
  CHECK(err.str().empty());
  const std::string first = read_file(options.out_path);
  CHECK(count_lines(first) == 10001);
  CHECK(out.str().find("10000 packets") != std::string::npos);
  CHECK(out.str().find("talkspurts") != std::string::npos);

  options.out_path = dir.path / "b.csv";
  std::ostringstream out2, err2;
  CHECK(cmd_gen(options, out2, err2) == 0);
  CHECK(read_file(options.out_path) == first);  // byte-identical
}

TEST_CASE("gen rejects unknown profiles by name") {
  TempDir dir;
  GenOptions options;
  options.profile_name = "flaky";
  options.out_path = dir.path / "x.csv";
  std::ostringstream out, err;
  CHECK(cmd_gen(options, out, err) != 0);
  CHECK(err.str().find("flaky") != std::string::npos);
}

TEST_CASE("gen applies profile overrides") {
  TempDir dir;
  GenOptions options;
  options.profile_name = "stable";
  options.overrides = {{"jitter_scale_ms", "0"}, {"spike_probability", "0"}};
  options.n_packets = 5;
  options.out_path = dir.path / "flat.csv";
  std::ostringstream out, err;
  REQUIRE(cmd_gen(options, out, err) == 0);
  const std::string body = read_file(options.out_path);
  CHECK(body.find("50.000") != std::string::npos);
  CHECK(count_lines(body) == 6);
}

TEST_CASE("compare renders one table per trace with one row per algorithm") {
  TempDir dir;
  ExperimentSpec spec;
  for (const std::string& name : builtin_profile_names()) {
    TraceSource source;
    source.label = name;
    source.profile = *builtin_profile(name);
    source.n_packets = 2000;
    source.seed = 7;
    spec.traces.push_back(source);
  }
  for (const std::string& id : algorithm_ids()) {
    SimulationConfig config;
    config.algorithm_id = id;
    spec.algorithms.push_back(config);
  }
  spec.output_dir = dir.path;
  spec.formats = {ReportFormat::kMarkdownTable, ReportFormat::kCsv,
                  ReportFormat::kJson};

  std::ostringstream out, err;
  CHECK(cmd_compare(spec, out, err) == 0);
  CHECK(err.str().empty());

  for (const std::string& name : builtin_profile_names()) {
    const std::string md = read_file(dir.path / (name + "_compare.md"));
    CHECK(md.find("### Comparison (" + name + ")") != std::string::npos);
    int rows = 0;
    for (const std::string& id : algorithm_ids()) {
      rows += md.find("| " + id + " |") != std::string::npos ? 1 : 0;
    }
    CHECK(rows == 4);
    CHECK(read_file(dir.path / (name + "_compare.csv")).size() > 0);
    const auto doc = nlohmann::json::parse(
        read_file(dir.path / (name + "_compare.json")));
    CHECK(doc["rows"].size() == 4);
  }
}

TEST_CASE("compare output files are byte-stable across invocations") {
  TempDir dir_a, dir_b;
  ExperimentSpec spec;
  TraceSource source;
  source.label = "stable";
  source.profile = stable_profile();
  source.n_packets = 3000;
  source.seed = 42;
  spec.traces.push_back(source);
  SimulationConfig config;
  config.algorithm_id = "suggested";
  spec.algorithms.push_back(config);
  spec.formats = {ReportFormat::kJson, ReportFormat::kCsv};

  spec.output_dir = dir_a.path;
  std::ostringstream out_a, err_a;
  REQUIRE(cmd_compare(spec, out_a, err_a) == 0);
  spec.output_dir = dir_b.path;
  std::ostringstream out_b, err_b;
  REQUIRE(cmd_compare(spec, out_b, err_b) == 0);

  CHECK(read_file(dir_a.path / "stable_compare.json") ==
        read_file(dir_b.path / "stable_compare.json"));
  CHECK(read_file(dir_a.path / "stable_compare.csv") ==
        read_file(dir_b.path / "stable_compare.csv"));
  CHECK(out_a.str() == out_b.str());
}

TEST_CASE("compare reports per-row failures and exits nonzero") {
  TempDir dir;
  ExperimentSpec spec;
  TraceSource source;
  source.label = "stable";
  source.profile = stable_profile();
  source.n_packets = 500;
  spec.traces.push_back(source);
  SimulationConfig good;
  good.algorithm_id = "exp-avg";
  SimulationConfig bad;
  bad.algorithm_id = "exp-avg";
  bad.algorithm_params = {{"alpha", "2.0"}};
  spec.algorithms = {good, bad};
  spec.output_dir = dir.path;
  spec.formats = {ReportFormat::kJson};

  std::ostringstream out, err;
  CHECK(cmd_compare(spec, out, err) == 1);
  const auto doc =
      nlohmann::json::parse(read_file(dir.path / "stable_compare.json"));
  REQUIRE(doc["rows"].size() == 2);
  CHECK(!doc["rows"][0].contains("error"));
  CHECK(doc["rows"][1].contains("error"));
}

TEST_CASE("compare on a single csv trace and single algorithm") {
  TempDir dir;
  const DelayTrace trace = generate_trace(stable_profile(), 300, 5);
  const auto csv_path = dir.path / "mini.csv";
  export_trace_csv(trace, csv_path);

  ExperimentSpec spec;
  TraceSource source;
  source.csv_path = csv_path;
  source.label = "mini";
  spec.traces.push_back(source);
  SimulationConfig config;
  config.algorithm_id = "min-d";
  spec.algorithms.push_back(config);
  spec.output_dir = dir.path;
  spec.formats = {ReportFormat::kMarkdownTable};

  std::ostringstream out, err;
  CHECK(cmd_compare(spec, out, err) == 0);
  const std::string md = read_file(dir.path / "mini_compare.md");
  CHECK(md.find("| min-d |") != std::string::npos);
  CHECK(count_lines(md) == 5);  // caption, blank, header, separator, 1 row
}

TEST_CASE("run emits the metrics table and requested files") {
  TempDir dir;
  RunOptions options;
  options.source.label = "stable";
  options.source.profile = stable_profile();
  options.source.n_packets = 1500;
  options.source.seed = 4;
  options.config.algorithm_id = "suggested";
  options.config.window_ms = 5000.0;
  options.output_dir = dir.path;
  options.formats = {ReportFormat::kJson, ReportFormat::kCsv};

  std::ostringstream out, err;
  CHECK(cmd_run(options, out, err) == 0);
  CHECK(out.str().find("| suggested |") != std::string::npos);
  const auto doc =
      nlohmann::json::parse(read_file(dir.path / "stable_suggested.json"));
  CHECK(doc["rows"][0]["algorithm"] == "suggested");
  CHECK(doc["timeseries"]["points"].size() > 0);
  CHECK(read_file(dir.path / "stable_suggested.csv").size() > 0);
  CHECK(read_file(dir.path / "stable_suggested_timeseries.csv")
            .rfind("window_start_ms", 0) == 0);

  RunOptions bad = options;
  bad.config.algorithm_id = "nope";
  std::ostringstream out2, err2;
  CHECK(cmd_run(bad, out2, err2) != 0);
  CHECK(err2.str().find("nope") != std::string::npos);
}

TEST_CASE("timeseries writes one row per window") {
  TempDir dir;
  TimeseriesOptions options;
  options.source.label = "stable";
  options.source.profile = stable_profile();
  options.source.n_packets = 10000;
  options.source.seed = 42;
  options.config.algorithm_id = "exp-avg";
  options.config.window_ms = 5000.0;
  options.out_path = dir.path / "ts.csv";

  std::ostringstream out, err;
  CHECK(cmd_timeseries(options, out, err) == 0);
  const std::string body = read_file(options.out_path);
  CHECK(count_lines(body) == 41);  // header + 40 windows
  CHECK(body.rfind("window_start_ms,mos,loss_pct,avg_delay_ms\n", 0) == 0);

  options.config.window_ms = 1e7;  // wider than the trace
  options.out_path = dir.path / "single.csv";
  std::ostringstream out2, err2;
  CHECK(cmd_timeseries(options, out2, err2) == 0);
  CHECK(count_lines(read_file(options.out_path)) == 2);
}

TEST_CASE("timeseries fails cleanly on a missing trace") {
  TempDir dir;
  TimeseriesOptions options;
  options.source.csv_path = dir.path / "absent.csv";
  options.config.algorithm_id = "exp-avg";
  options.out_path = dir.path / "out.csv";
  std::ostringstream out, err;
  CHECK(cmd_timeseries(options, out, err) != 0);
  CHECK(!err.str().empty());
}

TEST_CASE("config file parsing") {
  std::istringstream config_text(R"(# experiment
[profile lab]
base_delay_ms = 40
jitter_scale_ms = 4
spike_probability = 0.001
spike_magnitude_ms = 100
spike_decay = 0.7

[trace lab-long]
profile = lab
packets = 1234
seed = 9

[trace from-file]
csv = traces/real.csv

[algorithm exp-avg]
alpha = 0.9

[algorithm suggested]
window_n = 25

[output]
dir = results
formats = markdown-table,json
window_ms = 2500
)");
  const ConfigFile config = parse_config(config_text);
  REQUIRE(config.profiles.count("lab") == 1);
  CHECK(config.profiles.at("lab").base_delay_ms == 40.0);
  REQUIRE(config.traces.size() == 2);
  CHECK(config.traces[0].label == "lab-long");
  CHECK(config.traces[0].n_packets == 1234);
  CHECK(config.traces[0].seed == 9);
  CHECK(config.traces[0].profile.jitter_scale_ms == 4.0);
  CHECK(config.traces[1].csv_path == "traces/real.csv");
  REQUIRE(config.algorithms.size() == 2);
  CHECK(config.algorithms[0].algorithm_id == "exp-avg");
  CHECK(config.algorithms[1].algorithm_params.at("window_n") == "25");
  CHECK(config.output_dir.value() == "results");
  REQUIRE(config.formats.size() == 2);
  CHECK(config.window_ms.value() == 2500.0);
}

TEST_CASE("config file rejects unknown sections and keys") {
  std::istringstream bad_section("[widget a]\nx = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_section), doctest::Contains("widget"),
                       std::runtime_error);
  std::istringstream bad_key("[trace t]\nprofile = stable\nwat = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_key), doctest::Contains("wat"),
                       std::runtime_error);
  std::istringstream bad_profile("[trace t]\nprofile = unknown-name\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_profile),
                       doctest::Contains("unknown-name"), std::runtime_error);
  std::istringstream stray("x = 1\n");
  CHECK_THROWS_AS(parse_config(stray), std::runtime_error);
}

TEST_CASE("cli binary round trip") {
  const char* bin = std::getenv("PLAYOUT_SIM_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PLAYOUT_SIM_BIN must point at the CLI");
  TempDir dir;
  const std::string base = std::string(bin);

  const std::string gen_cmd = base + " gen stable 500 42 " +
                              (dir.path / "t.csv").string() + " > /dev/null";
  CHECK(std::system(gen_cmd.c_str()) == 0);
  CHECK(count_lines(read_file(dir.path / "t.csv")) == 501);

  const std::string cmp_cmd =
      base + " --format json --out-dir " + (dir.path / "out1").string() +
      " compare --trace " + (dir.path / "t.csv").string() +
      " --algorithms exp-avg,suggested > /dev/null";
  CHECK(std::system(cmp_cmd.c_str()) == 0);
  const std::string cmp_cmd2 =
      base + " --format json --out-dir " + (dir.path / "out2").string() +
      " compare --trace " + (dir.path / "t.csv").string() +
      " --algorithms exp-avg,suggested > /dev/null";
  CHECK(std::system(cmp_cmd2.c_str()) == 0);
  CHECK(read_file(dir.path / "out1" / "t_compare.json") ==
        read_file(dir.path / "out2" / "t_compare.json"));

  const std::string bad_cmd = base + " gen bogus 10 1 " +
                              (dir.path / "no.csv").string() +
                              " > /dev/null 2>&1";
  CHECK(std::system(bad_cmd.c_str()) != 0);

  // The environment variable supplies the default output directory.
  const std::string env_cmd =
      "PLAYOUT_SIM_OUT_DIR=" + (dir.path / "envout").string() + " " + base +
      " --format json compare --trace " + (dir.path / "t.csv").string() +
      " --algorithms min-d > /dev/null";
  CHECK(std::system(env_cmd.c_str()) == 0);
  CHECK(!read_file(dir.path / "envout" / "t_compare.json").empty());
}
