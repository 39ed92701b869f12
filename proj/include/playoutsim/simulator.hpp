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

#ifndef PLAYOUTSIM_SIMULATOR_HPP_
#define PLAYOUTSIM_SIMULATOR_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "playoutsim/playout_algorithms.hpp"
#include "playoutsim/quality_model.hpp"
#include "playoutsim/trace_model.hpp"

namespace playoutsim {

// Run-level results. The delay average covers played packets only (that is
// the delay a listener actually experiences); the loss percentage covers all
// packets in the trace.
struct RunMetrics {
  double avg_playout_delay_ms = 0.0;
  double loss_pct = 0.0;
  double r_factor = 0.0;
  double mos = 1.0;
  std::int64_t played_count = 0;
  std::int64_t lost_count = 0;
};

struct MosWindow {
  double window_start_ms = 0.0;
  double mos = 1.0;
  double loss_pct = 0.0;
  double avg_delay_ms = 0.0;
};

struct MosTimeseries {
  double window_ms = 5000.0;
  std::vector<MosWindow> points;  // contiguous, non-overlapping windows
};

struct SimulationConfig {
  std::string algorithm_id;
  AlgorithmParams algorithm_params;
  double window_ms = 5000.0;
  QualityParams quality;
};

struct SimulationResult {
  RunMetrics metrics;
  MosTimeseries timeseries;
};

// Replays the trace through one estimator. Per talkspurt the playout delay
// is frozen from the estimator at the first packet (after that packet's
// update); packet k plays at send_time_k + playout_delay. A packet is lost
// iff it arrives after its playout time; a tie plays. Lost packets still
// feed the estimator.
SimulationResult simulate(const DelayTrace& trace, const SimulationConfig& config);

// Same contract with a caller-supplied estimator (used by tests to wrap or
// instrument estimators).
SimulationResult simulate_with(const DelayTrace& trace, PlayoutEstimator& estimator,
                               double window_ms, const QualityParams& quality = {});

struct CompareRow {
  std::string algorithm_id;
  RunMetrics metrics;
};

// Runs every config independently against the same trace; row order follows
// the config order. Errors are rethrown tagged with the failing algorithm.
std::vector<CompareRow> compare(const DelayTrace& trace,
                                const std::vector<SimulationConfig>& configs);

// Stable-field-name serializations.
nlohmann::ordered_json to_json(const RunMetrics& metrics);
nlohmann::ordered_json to_json(const MosTimeseries& series);
void write_timeseries_csv(std::ostream& out, const MosTimeseries& series);

}  // namespace playoutsim

#endif  // PLAYOUTSIM_SIMULATOR_HPP_
