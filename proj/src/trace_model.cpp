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

#include "playoutsim/trace_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace playoutsim {
namespace {

constexpr char kCsvHeader[] = "seq,send_time_ms,delay_ms,talkspurt_id";
constexpr char kCsvHeaderWithFlag[] =
    "seq,send_time_ms,delay_ms,talkspurt_id,talkspurt_start";

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

// Uniform draw in [0, 1) from the top 53 bits; keeps the stream independent
// of the standard library's distribution implementations.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential_draw(std::mt19937_64& rng, double scale) {
  if (scale <= 0.0) return 0.0;
  return -scale * std::log1p(-next_unit(rng));
}

int uniform_int_draw(std::mt19937_64& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  int value = lo + static_cast<int>(next_unit(rng) * span);
  return std::min(value, hi);
}

void check_profile(const NetworkProfile& p) {
  if (p.base_delay_ms < 0.0 || p.jitter_scale_ms < 0.0 ||
      p.spike_magnitude_ms < 0.0) {
    throw TraceError("profile '" + p.name + "': magnitudes must be >= 0");
  }
  if (p.spike_probability < 0.0 || p.spike_probability > 1.0) {
    throw TraceError("profile '" + p.name + "': spike_probability must be in [0, 1]");
  }
  if (p.spike_decay <= 0.0 || p.spike_decay >= 1.0) {
    throw TraceError("profile '" + p.name + "': spike_decay must be in (0, 1)");
  }
  if (p.talkspurt_min < 1 || p.talkspurt_max < p.talkspurt_min) {
    throw TraceError("profile '" + p.name + "': bad talkspurt length range");
  }
  if (p.packet_interval_ms <= 0.0) {
    throw TraceError("profile '" + p.name + "': packet_interval_ms must be > 0");
  }
}

}  // namespace

std::int64_t DelayTrace::talkspurt_count() const {
  std::int64_t count = 0;
  for (const PacketObservation& p : packets) {
    if (p.is_talkspurt_start) ++count;
  }
  return count;
}

double DelayTrace::duration_ms() const {
  return packets.empty() ? 0.0 : packets.back().send_time_ms;
}

NetworkProfile stable_profile() {
  NetworkProfile p;
  p.name = "stable";
  p.base_delay_ms = 50.0;
  p.jitter_scale_ms = 3.0;
  p.spike_probability = 0.0005;
  p.spike_magnitude_ms = 80.0;
  p.spike_decay = 0.8;
  return p;
}

NetworkProfile medium_jitter_profile() {
  NetworkProfile p;
  p.name = "medium-jitter";
  p.base_delay_ms = 50.0;
  p.jitter_scale_ms = 12.0;
  p.spike_probability = 0.004;
  p.spike_magnitude_ms = 250.0;
  p.spike_decay = 0.8;
  return p;
}

NetworkProfile high_jitter_profile() {
  NetworkProfile p;
  p.name = "high-jitter";
  p.base_delay_ms = 50.0;
  p.jitter_scale_ms = 30.0;
  p.spike_probability = 0.012;
  p.spike_magnitude_ms = 1500.0;
  p.spike_decay = 0.5;
  return p;
}

std::optional<NetworkProfile> builtin_profile(const std::string& name) {
  if (name == "stable") return stable_profile();
  if (name == "medium-jitter" || name == "medium") return medium_jitter_profile();
  if (name == "high-jitter" || name == "high") return high_jitter_profile();
  return std::nullopt;
}

std::vector<std::string> builtin_profile_names() {
  return {"stable", "medium-jitter", "high-jitter"};
}

NetworkProfile profile_from_kv(const std::map<std::string, std::string>& kv,
                               const NetworkProfile& defaults) {
  NetworkProfile p = defaults;
  for (const auto& [key, raw] : kv) {
    if (key == "name") {
      p.name = raw;
      continue;
    }
    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw TraceError("profile key '" + key + "': not a number: '" + raw + "'");
    }
    if (key == "base_delay_ms") {
      p.base_delay_ms = value;
    } else if (key == "jitter_scale_ms") {
      p.jitter_scale_ms = value;
    } else if (key == "spike_probability") {
      p.spike_probability = value;
    } else if (key == "spike_magnitude_ms") {
      p.spike_magnitude_ms = value;
    } else if (key == "spike_decay") {
      p.spike_decay = value;
    } else if (key == "talkspurt_min") {
      p.talkspurt_min = static_cast<int>(value);
    } else if (key == "talkspurt_max") {
      p.talkspurt_max = static_cast<int>(value);
    } else if (key == "packet_interval_ms") {
      p.packet_interval_ms = value;
    } else {
      throw TraceError("unknown profile key '" + key + "'");
    }
  }
  check_profile(p);
  return p;
}

DelayTrace generate_trace(const NetworkProfile& profile, std::int64_t n_packets,
                          std::uint64_t seed) {
  check_profile(profile);
  if (n_packets < 1) {
    throw std::invalid_argument("generate_trace: need at least one packet");
  }

  std::mt19937_64 rng(seed);
  DelayTrace trace;
  trace.profile_name = profile.name;
  trace.base_delay_ms = profile.base_delay_ms;
  trace.seed = seed;
  trace.packet_interval_ms = profile.packet_interval_ms;
  trace.packets.reserve(static_cast<std::size_t>(n_packets));

  double spike_level = 0.0;
  std::int64_t talkspurt_id = -1;
  int packets_left = 0;
  for (std::int64_t i = 0; i < n_packets; ++i) {
    PacketObservation pkt;
    pkt.seq = i;
    pkt.send_time_ms = round3(static_cast<double>(i) * profile.packet_interval_ms);
    if (packets_left == 0) {
      packets_left =
          uniform_int_draw(rng, profile.talkspurt_min, profile.talkspurt_max);
      ++talkspurt_id;
      pkt.is_talkspurt_start = true;
    }
    --packets_left;
    pkt.talkspurt_id = talkspurt_id;

    const double jitter = exponential_draw(rng, profile.jitter_scale_ms);
    spike_level *= profile.spike_decay;
    if (next_unit(rng) < profile.spike_probability) {
      spike_level += profile.spike_magnitude_ms;
    }
    pkt.network_delay_ms = round3(profile.base_delay_ms + jitter + spike_level);
    trace.packets.push_back(pkt);
  }
  return trace;
}

void validate_trace(const DelayTrace& trace) {
  if (trace.packets.empty()) {
    throw TraceError("trace has no packets");
  }
  std::unordered_set<std::int64_t> finished_talkspurts;
  std::int64_t current_talkspurt = -1;
  for (std::size_t i = 0; i < trace.packets.size(); ++i) {
    const PacketObservation& p = trace.packets[i];
    const std::string row = "packet " + std::to_string(i);
    if (p.seq != static_cast<std::int64_t>(i)) {
      throw TraceError(row + ": seq must be contiguous from 0 (got " +
                       std::to_string(p.seq) + ")");
    }
    if (!std::isfinite(p.network_delay_ms) || p.network_delay_ms < 0.0) {
      throw TraceError(row + ": negative or non-finite delay");
    }
    if (p.talkspurt_id != current_talkspurt) {
      if (!p.is_talkspurt_start) {
        throw TraceError(row + ": talkspurt " + std::to_string(p.talkspurt_id) +
                         " does not start with a flagged packet");
      }
      if (finished_talkspurts.count(p.talkspurt_id) != 0) {
        throw TraceError(row + ": talkspurt " + std::to_string(p.talkspurt_id) +
                         " is not contiguous");
      }
      if (current_talkspurt >= 0) finished_talkspurts.insert(current_talkspurt);
      current_talkspurt = p.talkspurt_id;
    } else if (p.is_talkspurt_start && i != 0) {
      throw TraceError(row + ": start flag inside talkspurt " +
                       std::to_string(p.talkspurt_id));
    }
  }
}

DelayTrace load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw TraceError("cannot open trace file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw TraceError(path.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_flag_column = false;
  if (line == kCsvHeaderWithFlag) {
    has_flag_column = true;
  } else if (line != kCsvHeader) {
    throw TraceError(path.string() + ": line 1: unexpected header '" + line +
                     "'");
  }

  DelayTrace trace;
  trace.profile_name = path.stem().string();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);

    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    const std::size_t expected = has_flag_column ? 5 : 4;
    if (fields.size() != expected) {
      throw TraceError(where + ": expected " + std::to_string(expected) +
                       " fields, got " + std::to_string(fields.size()));
    }

    PacketObservation pkt;
    try {
      pkt.seq = std::stoll(fields[0]);
      pkt.send_time_ms = std::stod(fields[1]);
      pkt.network_delay_ms = std::stod(fields[2]);
      pkt.talkspurt_id = std::stoll(fields[3]);
      if (has_flag_column) {
        pkt.is_talkspurt_start = std::stoi(fields[4]) != 0;
      }
    } catch (const std::exception&) {
      throw TraceError(where + ": malformed row '" + line + "'");
    }
    if (pkt.network_delay_ms < 0.0) {
      throw TraceError(where + ": negative delay " + fields[2]);
    }
    if (!has_flag_column) {
      pkt.is_talkspurt_start =
          trace.packets.empty() ||
          trace.packets.back().talkspurt_id != pkt.talkspurt_id;
    }
    trace.packets.push_back(pkt);
  }
  if (trace.packets.empty()) {
    throw TraceError(path.string() + ": no packet rows");
  }
  if (trace.packets.size() >= 2) {
    trace.packet_interval_ms =
        trace.packets[1].send_time_ms - trace.packets[0].send_time_ms;
  }
  trace.base_delay_ms =
      std::min_element(trace.packets.begin(), trace.packets.end(),
                       [](const auto& a, const auto& b) {
                         return a.network_delay_ms < b.network_delay_ms;
                       })
          ->network_delay_ms;
  validate_trace(trace);
  return trace;
}

void export_trace_csv(const DelayTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) {
    throw TraceError("cannot write trace file: " + path.string());
  }
  out << kCsvHeader << "\n";
  char buf[128];
  for (const PacketObservation& p : trace.packets) {
    std::snprintf(buf, sizeof(buf), "%lld,%.3f,%.3f,%lld\n",
                  static_cast<long long>(p.seq), p.send_time_ms,
                  p.network_delay_ms, static_cast<long long>(p.talkspurt_id));
    out << buf;
  }
  if (!out) {
    throw TraceError("write failed: " + path.string());
  }
}

}  // namespace playoutsim
