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

#ifndef PLAYOUTSIM_CLI_REPORT_HPP_
#define PLAYOUTSIM_CLI_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "playoutsim/simulator.hpp"
#include "playoutsim/trace_model.hpp"

namespace playoutsim {

enum class ReportFormat { kMarkdownTable, kCsv, kJson };

// Accepts "markdown-table" (also "markdown", "md"), "csv", "json".
ReportFormat parse_report_format(const std::string& name);
std::string report_format_extension(ReportFormat format);

// One trace input: a CSV file when csv_path is set, otherwise a generated
// trace from `profile` with n_packets and seed.
struct TraceSource {
  std::string label;
  std::filesystem::path csv_path;
  NetworkProfile profile;
  std::int64_t n_packets = 10000;
  std::uint64_t seed = 42;
};

DelayTrace materialize(const TraceSource& source);

struct ExperimentSpec {
  std::vector<TraceSource> traces;
  std::vector<SimulationConfig> algorithms;
  std::filesystem::path output_dir = ".";
  std::vector<ReportFormat> formats = {ReportFormat::kMarkdownTable};
  double window_ms = 5000.0;
};

struct ReportRow {
  std::string algorithm;
  RunMetrics metrics;
  std::string error;  // non-empty when the run failed
};

struct ReportTable {
  std::string caption;
  std::string trace_label;
  std::vector<ReportRow> rows;
};

// Markdown mirrors the four-column comparison layout with values rounded to
// two decimals; CSV and JSON carry full precision.
std::string render_markdown(const ReportTable& table);
std::string render_csv(const ReportTable& table);
nlohmann::ordered_json render_json(const ReportTable& table);

// Experiment config file: '#' comments, [section] headers, key = value
// lines. Sections: [profile NAME], [trace NAME], [algorithm ID], [output].
struct ConfigFile {
  std::map<std::string, NetworkProfile> profiles;
  std::vector<TraceSource> traces;
  std::vector<SimulationConfig> algorithms;
  std::optional<std::filesystem::path> output_dir;
  std::vector<ReportFormat> formats;
  std::optional<double> window_ms;
};

ConfigFile parse_config(std::istream& in, const std::string& origin = "config");
ConfigFile parse_config_file(const std::filesystem::path& path);

struct GenOptions {
  std::string profile_name;
  std::map<std::string, NetworkProfile> custom_profiles;  // from --config
  std::map<std::string, std::string> overrides;           // profile key=value
  std::int64_t n_packets = 10000;
  std::uint64_t seed = 42;
  std::filesystem::path out_path;
};

struct RunOptions {
  TraceSource source;
  SimulationConfig config;
  std::filesystem::path output_dir = ".";
  std::vector<ReportFormat> formats;  // empty: stdout only
};

struct TimeseriesOptions {
  TraceSource source;
  SimulationConfig config;
  std::filesystem::path out_path;
};

// Subcommand bodies. All return a process exit status (0 on success) and
// report failures on `err`.
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);
int cmd_timeseries(const TimeseriesOptions& options, std::ostream& out,
                   std::ostream& err);

}  // namespace playoutsim

#endif  // PLAYOUTSIM_CLI_REPORT_HPP_
