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

#include "playoutsim/cli_report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace playoutsim {
namespace {

std::string two_decimals(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string full_precision(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  }
  return out.empty() ? std::string("trace") : out;
}

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto value = std::stoull(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": not an integer: '" + raw + "'");
  }
}

double parse_number(const std::string& raw, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": not a number: '" + raw + "'");
  }
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "markdown-table" || name == "markdown" || name == "md") {
    return ReportFormat::kMarkdownTable;
  }
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw std::runtime_error("unknown report format '" + name +
                           "' (expected markdown-table, csv or json)");
}

std::string report_format_extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdownTable:
      return ".md";
    case ReportFormat::kCsv:
      return ".csv";
    case ReportFormat::kJson:
      return ".json";
  }
  return ".txt";
}

DelayTrace materialize(const TraceSource& source) {
  if (!source.csv_path.empty()) {
    DelayTrace trace = load_trace_csv(source.csv_path);
    if (!source.label.empty()) trace.profile_name = source.label;
    return trace;
  }
  DelayTrace trace = generate_trace(source.profile, source.n_packets, source.seed);
  if (!source.label.empty()) trace.profile_name = source.label;
  return trace;
}

std::string render_markdown(const ReportTable& table) {
  std::ostringstream out;
  out << "### " << table.caption << "\n\n";
  out << "| Algorithm Used | Average Packet Delay (ms) | Loss Percentage (%) "
         "| Mean Opinion Score (MOS) |\n";
  out << "| --- | --- | --- | --- |\n";
  std::vector<std::string> failures;
  for (const ReportRow& row : table.rows) {
    if (!row.error.empty()) {
      out << "| " << row.algorithm << " | - | - | - |\n";
      failures.push_back(row.algorithm + ": " + row.error);
      continue;
    }
    out << "| " << row.algorithm << " | "
        << two_decimals(row.metrics.avg_playout_delay_ms) << " | "
        << two_decimals(row.metrics.loss_pct) << " | "
        << two_decimals(row.metrics.mos) << " |\n";
  }
  for (const std::string& failure : failures) {
    out << "\n- failed " << failure << "\n";
  }
  return out.str();
}

std::string render_csv(const ReportTable& table) {
  std::ostringstream out;
  out << "algorithm,avg_playout_delay_ms,loss_pct,r_factor,mos,"
         "played_count,lost_count,error\n";
  for (const ReportRow& row : table.rows) {
    if (!row.error.empty()) {
      std::string safe = row.error;
      std::replace(safe.begin(), safe.end(), ',', ';');
      out << row.algorithm << ",,,,,,," << safe << "\n";
      continue;
    }
    const RunMetrics& m = row.metrics;
    out << row.algorithm << "," << full_precision(m.avg_playout_delay_ms) << ","
        << full_precision(m.loss_pct) << "," << full_precision(m.r_factor)
        << "," << full_precision(m.mos) << "," << m.played_count << ","
        << m.lost_count << ",\n";
  }
  return out.str();
}

nlohmann::ordered_json render_json(const ReportTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : table.rows) {
    nlohmann::ordered_json entry;
    entry["algorithm"] = row.algorithm;
    if (row.error.empty()) {
      entry.update(to_json(row.metrics));
    } else {
      entry["error"] = row.error;
    }
    rows.push_back(std::move(entry));
  }
  return nlohmann::ordered_json{{"caption", table.caption},
                                {"trace", table.trace_label},
                                {"rows", std::move(rows)}};
}

ConfigFile parse_config(std::istream& in, const std::string& origin) {
  ConfigFile config;
  std::string section_kind;
  std::string section_name;
  std::map<std::string, std::string> section_kv;
  std::vector<std::pair<std::pair<std::string, std::string>,
                        std::map<std::string, std::string>>>
      sections;

  auto flush_section = [&]() {
    if (!section_kind.empty()) {
      sections.push_back({{section_kind, section_name}, section_kv});
    }
    section_kv.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const std::string where = origin + ": line " + std::to_string(line_no);
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw std::runtime_error(where + ": unterminated section header");
      }
      flush_section();
      const std::string header = trim(text.substr(1, text.size() - 2));
      const std::size_t space = header.find(' ');
      section_kind = space == std::string::npos ? header : header.substr(0, space);
      section_name =
          space == std::string::npos ? "" : trim(header.substr(space + 1));
      if (section_kind != "profile" && section_kind != "trace" &&
          section_kind != "algorithm" && section_kind != "output") {
        throw std::runtime_error(where + ": unknown section '" + section_kind + "'");
      }
      if (section_kind != "output" && section_name.empty()) {
        throw std::runtime_error(where + ": section '" + section_kind +
                                 "' needs a name");
      }
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(where + ": expected 'key = value'");
    }
    if (section_kind.empty()) {
      throw std::runtime_error(where + ": key outside of any section");
    }
    section_kv[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
  }
  flush_section();

  // Profiles first so traces can reference them regardless of order.
  for (const auto& [header, kv] : sections) {
    if (header.first != "profile") continue;
    NetworkProfile profile = profile_from_kv(kv);
    profile.name = header.second;
    config.profiles[header.second] = profile;
  }
  for (const auto& [header, kv] : sections) {
    if (header.first == "trace") {
      TraceSource source;
      source.label = header.second;
      for (const auto& [key, value] : kv) {
        if (key == "csv") {
          source.csv_path = value;
        } else if (key == "profile") {
          auto custom = config.profiles.find(value);
          if (custom != config.profiles.end()) {
            source.profile = custom->second;
          } else if (auto builtin = builtin_profile(value)) {
            source.profile = *builtin;
          } else {
            throw std::runtime_error("trace '" + header.second +
                                     "': unknown profile '" + value + "'");
          }
        } else if (key == "packets") {
          source.n_packets =
              static_cast<std::int64_t>(parse_u64(value, "trace packets"));
        } else if (key == "seed") {
          source.seed = parse_u64(value, "trace seed");
        } else {
          throw std::runtime_error("trace '" + header.second +
                                   "': unknown key '" + key + "'");
        }
      }
      config.traces.push_back(std::move(source));
    } else if (header.first == "algorithm") {
      SimulationConfig sim;
      sim.algorithm_id = header.second;
      for (const auto& [key, value] : kv) {
        sim.algorithm_params[key] = value;
      }
      config.algorithms.push_back(std::move(sim));
    } else if (header.first == "output") {
      for (const auto& [key, value] : kv) {
        if (key == "dir") {
          config.output_dir = value;
        } else if (key == "formats") {
          std::stringstream list(value);
          std::string item;
          while (std::getline(list, item, ',')) {
            config.formats.push_back(parse_report_format(trim(item)));
          }
        } else if (key == "window_ms") {
          config.window_ms = parse_number(value, "output window_ms");
        } else {
          throw std::runtime_error("output section: unknown key '" + key + "'");
        }
      }
    }
  }
  return config;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path.string());
  }
  return parse_config(in, path.string());
}

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  try {
    NetworkProfile profile;
    auto custom = options.custom_profiles.find(options.profile_name);
    if (custom != options.custom_profiles.end()) {
      profile = custom->second;
    } else if (auto builtin = builtin_profile(options.profile_name)) {
      profile = *builtin;
    } else {
      throw std::runtime_error("unknown profile '" + options.profile_name + "'");
    }
    if (!options.overrides.empty()) {
      profile = profile_from_kv(options.overrides, profile);
    }

    const DelayTrace trace = generate_trace(profile, options.n_packets, options.seed);
    export_trace_csv(trace, options.out_path);

    double sum = 0.0;
    double max_delay = 0.0;
    for (const PacketObservation& p : trace.packets) {
      sum += p.network_delay_ms;
      max_delay = std::max(max_delay, p.network_delay_ms);
    }
    out << "wrote " << options.out_path.string() << ": "
        << trace.packets.size() << " packets, " << trace.talkspurt_count()
        << " talkspurts, mean delay " << two_decimals(sum / trace.packets.size())
        << " ms, max delay " << two_decimals(max_delay) << " ms\n";
    return 0;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const DelayTrace trace = materialize(options.source);
    const SimulationResult result = simulate(trace, options.config);

    ReportTable table;
    table.trace_label = trace.profile_name;
    table.caption = "Comparison (" + trace.profile_name + ")";
    table.rows.push_back(
        ReportRow{options.config.algorithm_id, result.metrics, ""});
    out << render_markdown(table);

    if (!options.formats.empty()) {
      std::filesystem::create_directories(options.output_dir);
      const std::string stem = sanitize_label(trace.profile_name) + "_" +
                               sanitize_label(options.config.algorithm_id);
      for (ReportFormat format : options.formats) {
        const auto path =
            options.output_dir / (stem + report_format_extension(format));
        if (format == ReportFormat::kMarkdownTable) {
          write_text_file(path, render_markdown(table));
        } else if (format == ReportFormat::kCsv) {
          write_text_file(path, render_csv(table));
          std::ostringstream ts;
          write_timeseries_csv(ts, result.timeseries);
          write_text_file(options.output_dir / (stem + "_timeseries.csv"),
                          ts.str());
        } else {
          nlohmann::ordered_json doc = render_json(table);
          doc["timeseries"] = to_json(result.timeseries);
          write_text_file(path, doc.dump(2) + "\n");
        }
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "run: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.traces.empty() || spec.algorithms.empty()) {
    err << "compare: need at least one trace and one algorithm\n";
    return 1;
  }
  bool any_failed = false;
  try {
    if (!spec.formats.empty()) {
      std::filesystem::create_directories(spec.output_dir);
    }
    for (const TraceSource& source : spec.traces) {
      ReportTable table;
      DelayTrace trace;
      try {
        trace = materialize(source);
      } catch (const std::exception& e) {
        err << "compare: trace '" << source.label << "': " << e.what() << "\n";
        any_failed = true;
        continue;
      }
      table.trace_label = trace.profile_name;
      table.caption = "Comparison (" + trace.profile_name + ")";
      for (const SimulationConfig& base : spec.algorithms) {
        SimulationConfig config = base;
        config.window_ms = spec.window_ms;
        ReportRow row;
        row.algorithm = config.algorithm_id;
        try {
          row.metrics = simulate(trace, config).metrics;
        } catch (const std::exception& e) {
          row.error = e.what();
          any_failed = true;
        }
        table.rows.push_back(std::move(row));
      }

      out << render_markdown(table) << "\n";
      const std::string stem = sanitize_label(trace.profile_name) + "_compare";
      for (ReportFormat format : spec.formats) {
        const auto path = spec.output_dir / (stem + report_format_extension(format));
        if (format == ReportFormat::kMarkdownTable) {
          write_text_file(path, render_markdown(table));
        } else if (format == ReportFormat::kCsv) {
          write_text_file(path, render_csv(table));
        } else {
          write_text_file(path, render_json(table).dump(2) + "\n");
        }
      }
    }
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << "\n";
    return 1;
  }
  return any_failed ? 1 : 0;
}

int cmd_timeseries(const TimeseriesOptions& options, std::ostream& out,
                   std::ostream& err) {
  try {
    const DelayTrace trace = materialize(options.source);
    const SimulationResult result = simulate(trace, options.config);
    std::ostringstream body;
    write_timeseries_csv(body, result.timeseries);
    write_text_file(options.out_path, body.str());
    out << "wrote " << options.out_path.string() << ": "
        << result.timeseries.points.size() << " windows of "
        << options.config.window_ms << " ms\n";
    return 0;
  } catch (const std::exception& e) {
    err << "timeseries: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace playoutsim
