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

#ifndef PLAYOUTSIM_TRACE_MODEL_HPP_
#define PLAYOUTSIM_TRACE_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "playoutsim/packet.hpp"

namespace playoutsim {

// Parse or validation failure in trace data. Messages name the offending
// line when the source is a CSV file.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Synthetic delay model: delay = base + exponential jitter + spike level.
// Each packet the spike level decays by spike_decay; with spike_probability
// a new spike of spike_magnitude_ms is added on top. Talkspurt lengths are
// drawn uniformly from [talkspurt_min, talkspurt_max] packets.
struct NetworkProfile {
  std::string name = "custom";
  double base_delay_ms = 50.0;
  double jitter_scale_ms = 3.0;
  double spike_probability = 0.0;
  double spike_magnitude_ms = 0.0;
  double spike_decay = 0.8;
  int talkspurt_min = 10;
  int talkspurt_max = 80;
  double packet_interval_ms = 20.0;
};

struct DelayTrace {
  std::vector<PacketObservation> packets;
  std::string profile_name = "custom";
  double base_delay_ms = 0.0;
  std::uint64_t seed = 0;
  double packet_interval_ms = 20.0;

  std::int64_t talkspurt_count() const;
  double duration_ms() const;  // last send time, 0 for a single packet
};

// Built-in profiles: "stable", "medium-jitter", "high-jitter".
NetworkProfile stable_profile();
NetworkProfile medium_jitter_profile();
NetworkProfile high_jitter_profile();
std::optional<NetworkProfile> builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();

// Reads a profile from flat key=value pairs. Recognized keys match the
// NetworkProfile field names; unknown keys throw.
NetworkProfile profile_from_kv(const std::map<std::string, std::string>& kv,
                               const NetworkProfile& defaults = {});

// Deterministic in (profile, n_packets, seed). Delays are quantized to
// 0.001 ms so CSV round-trips are exact.
DelayTrace generate_trace(const NetworkProfile& profile, std::int64_t n_packets,
                          std::uint64_t seed);

// Canonical CSV: header "seq,send_time_ms,delay_ms,talkspurt_id", LF line
// endings, fixed-point values with 3 decimals. An optional fifth column
// "talkspurt_start" (0/1) is accepted on load; without it the start flags
// are reconstructed from talkspurt_id transitions.
DelayTrace load_trace_csv(const std::filesystem::path& path);
void export_trace_csv(const DelayTrace& trace, const std::filesystem::path& path);

// Enforces the trace invariants (contiguous seq from 0, contiguous talkspurt
// runs with start flags, non-negative finite delays). Throws TraceError.
void validate_trace(const DelayTrace& trace);

}  // namespace playoutsim

#endif  // PLAYOUTSIM_TRACE_MODEL_HPP_
