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

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "playoutsim/cli_report.hpp"

namespace {

using playoutsim::AlgorithmParams;
using playoutsim::ConfigFile;
using playoutsim::ReportFormat;
using playoutsim::SimulationConfig;
using playoutsim::TraceSource;

std::vector<ReportFormat> parse_formats(const std::string& csv_list) {
  std::vector<ReportFormat> formats;
  std::string item;
  std::stringstream stream(csv_list);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) formats.push_back(playoutsim::parse_report_format(item));
  }
  return formats;
}

AlgorithmParams parse_params(const std::vector<std::string>& pairs) {
  AlgorithmParams params;
  for (const std::string& pair : pairs) {
    const std::size_t eq = pair.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--param", "expected key=value, got '" + pair + "'");
    }
    params[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return params;
}

std::vector<std::string> split_list(const std::string& csv_list) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream stream(csv_list);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive VoIP playout buffer simulator"};
  app.require_subcommand(1);
  app.fallthrough(true);  // global flags may follow the subcommand

  std::string out_dir = ".";
  std::string formats_flag;
  std::string config_path;
  std::uint64_t seed = 42;
  app.add_option("--out-dir", out_dir, "Output directory for report files")
      ->envname("PLAYOUT_SIM_OUT_DIR");
  app.add_option("--format", formats_flag,
                 "Comma-separated report formats: markdown-table,csv,json");
  app.add_option("--config", config_path, "Experiment config file");
  app.add_option("--seed", seed, "Seed for generated traces");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a delay trace CSV");
  std::string gen_profile;
  std::int64_t gen_packets = 10000;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  std::map<std::string, std::string> gen_overrides;
  gen->add_option("profile", gen_profile, "Profile name (stable, medium-jitter, high-jitter or from --config)")->required();
  gen->add_option("packets", gen_packets, "Number of packets")->required();
  gen->add_option("seed", gen_seed, "RNG seed")->required();
  gen->add_option("out", gen_out, "Output CSV path")->required();
  const std::map<std::string, std::string> override_flags = {
      {"--base-delay", "base_delay_ms"},
      {"--jitter", "jitter_scale_ms"},
      {"--spike-prob", "spike_probability"},
      {"--spike-magnitude", "spike_magnitude_ms"},
      {"--spike-decay", "spike_decay"},
      {"--talkspurt-min", "talkspurt_min"},
      {"--talkspurt-max", "talkspurt_max"},
      {"--interval", "packet_interval_ms"},
  };
  for (const auto& [flag, key] : override_flags) {
    const std::string profile_key = key;
    gen->add_option_function<std::string>(
        flag,
        [&gen_overrides, profile_key](const std::string& value) {
          gen_overrides[profile_key] = value;
        },
        "Override profile key " + key);
  }

  // shared trace/algorithm selection flags
  std::vector<std::string> trace_csvs;
  std::vector<std::string> profile_names;
  std::int64_t packets = 10000;
  std::string algorithm;
  std::string algorithms_flag = "all";
  std::vector<std::string> param_pairs;
  double window_ms = 5000.0;
  std::string mos_map = "standard";

  auto* run = app.add_subcommand("run", "Run one algorithm over one trace");
  run->add_option("--trace", trace_csvs, "Trace CSV path");
  run->add_option("--profile", profile_names, "Generated profile name");
  run->add_option("--packets", packets, "Packets for generated traces");
  run->add_option("--algorithm", algorithm, "Algorithm id")->required();
  run->add_option("--param", param_pairs, "Algorithm parameter key=value");
  run->add_option("--window-ms", window_ms, "Timeseries window in ms");
  run->add_option("--mos-map", mos_map, "R-to-MOS map: standard or paper-literal");

  auto* cmp = app.add_subcommand("compare", "Compare algorithms over traces");
  cmp->add_option("--trace", trace_csvs, "Trace CSV path (repeatable)");
  cmp->add_option("--profile", profile_names, "Generated profile name (repeatable)");
  cmp->add_option("--packets", packets, "Packets for generated traces");
  cmp->add_option("--algorithms", algorithms_flag,
                  "Comma-separated algorithm ids, or 'all'");
  cmp->add_option("--window-ms", window_ms, "Timeseries window in ms");
  cmp->add_option("--mos-map", mos_map, "R-to-MOS map: standard or paper-literal");

  auto* ts = app.add_subcommand("timeseries", "Emit per-window MOS CSV");
  std::string ts_out;
  ts->add_option("--trace", trace_csvs, "Trace CSV path");
  ts->add_option("--profile", profile_names, "Generated profile name");
  ts->add_option("--packets", packets, "Packets for generated traces");
  ts->add_option("--algorithm", algorithm, "Algorithm id")->required();
  ts->add_option("--param", param_pairs, "Algorithm parameter key=value");
  ts->add_option("--window-ms", window_ms, "Window length in ms");
  ts->add_option("--out", ts_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ConfigFile config;
    if (!config_path.empty()) {
      config = playoutsim::parse_config_file(config_path);
    }

    const auto resolve_mos_map = [&mos_map]() {
      if (mos_map == "standard") return playoutsim::MosMapping::kStandard;
      if (mos_map == "paper-literal") return playoutsim::MosMapping::kPaperLiteral;
      throw std::runtime_error("--mos-map must be 'standard' or 'paper-literal'");
    };

    auto collect_sources = [&]() {
      std::vector<TraceSource> sources;
      for (const std::string& path : trace_csvs) {
        TraceSource source;
        source.csv_path = path;
        source.label = std::filesystem::path(path).stem().string();
        sources.push_back(std::move(source));
      }
      for (const std::string& name : profile_names) {
        TraceSource source;
        auto custom = config.profiles.find(name);
        if (custom != config.profiles.end()) {
          source.profile = custom->second;
        } else if (auto builtin = playoutsim::builtin_profile(name)) {
          source.profile = *builtin;
        } else {
          throw std::runtime_error("unknown profile '" + name + "'");
        }
        source.label = name;
        source.n_packets = packets;
        source.seed = seed;
        sources.push_back(std::move(source));
      }
      if (sources.empty()) sources = config.traces;
      return sources;
    };

    if (gen->parsed()) {
      playoutsim::GenOptions options;
      options.profile_name = gen_profile;
      options.custom_profiles = config.profiles;
      options.overrides = gen_overrides;
      options.n_packets = gen_packets;
      options.seed = gen_seed;
      options.out_path = gen_out;
      return playoutsim::cmd_gen(options, std::cout, std::cerr);
    }

    if (run->parsed()) {
      const auto sources = collect_sources();
      if (sources.size() != 1) {
        std::cerr << "run: exactly one --trace or --profile is required\n";
        return 1;
      }
      playoutsim::RunOptions options;
      options.source = sources.front();
      options.config.algorithm_id = algorithm;
      options.config.algorithm_params = parse_params(param_pairs);
      options.config.window_ms = window_ms;
      options.config.quality.mos_map = resolve_mos_map();
      options.output_dir = out_dir;
      options.formats = parse_formats(formats_flag);
      return playoutsim::cmd_run(options, std::cout, std::cerr);
    }

    if (cmp->parsed()) {
      playoutsim::ExperimentSpec spec;
      spec.traces = collect_sources();
      std::vector<std::string> ids = algorithms_flag == "all"
                                         ? playoutsim::algorithm_ids()
                                         : split_list(algorithms_flag);
      for (const std::string& id : ids) {
        SimulationConfig sim;
        sim.algorithm_id = id;
        spec.algorithms.push_back(std::move(sim));
      }
      if (!config.algorithms.empty() && algorithms_flag == "all") {
        spec.algorithms = config.algorithms;
      }
      for (SimulationConfig& sim : spec.algorithms) {
        sim.quality.mos_map = resolve_mos_map();
      }
      spec.output_dir = config.output_dir.value_or(out_dir);
      if (out_dir != ".") spec.output_dir = out_dir;
      spec.window_ms = config.window_ms.value_or(window_ms);
      spec.formats = formats_flag.empty() ? config.formats
                                          : parse_formats(formats_flag);
      return playoutsim::cmd_compare(spec, std::cout, std::cerr);
    }

    if (ts->parsed()) {
      const auto sources = collect_sources();
      if (sources.size() != 1) {
        std::cerr << "timeseries: exactly one --trace or --profile is required\n";
        return 1;
      }
      playoutsim::TimeseriesOptions options;
      options.source = sources.front();
      options.config.algorithm_id = algorithm;
      options.config.algorithm_params = parse_params(param_pairs);
      options.config.window_ms = window_ms;
      options.out_path = ts_out;
      return playoutsim::cmd_timeseries(options, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
