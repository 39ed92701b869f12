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

#include "playoutsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace playoutsim {
namespace {

struct WindowAccumulator {
  std::int64_t total = 0;
  std::int64_t lost = 0;
  double played_delay_sum = 0.0;
};

}  // namespace

SimulationResult simulate_with(const DelayTrace& trace, PlayoutEstimator& estimator,
                               double window_ms, const QualityParams& quality) {
  if (trace.packets.empty()) {
    throw std::invalid_argument("simulate: trace is empty");
  }
  if (!(window_ms > 0.0)) {
    throw std::invalid_argument("simulate: window_ms must be > 0");
  }

  const std::size_t n_windows =
      static_cast<std::size_t>(trace.duration_ms() / window_ms) + 1;
  std::vector<WindowAccumulator> windows(n_windows);

  double playout_delay = 0.0;
  std::int64_t played = 0;
  std::int64_t lost = 0;
  double played_delay_sum = 0.0;

  for (const PacketObservation& pkt : trace.packets) {
    estimator.update(pkt);
    if (pkt.is_talkspurt_start) {
      playout_delay = estimator.decide(pkt.talkspurt_id).playout_delay_ms;
    }
    const double arrival = pkt.send_time_ms + pkt.network_delay_ms;
    const double play_at = pkt.send_time_ms + playout_delay;
    const bool is_lost = arrival > play_at;  // ties play

    auto window_index = static_cast<std::size_t>(pkt.send_time_ms / window_ms);
    window_index = std::min(window_index, n_windows - 1);
    WindowAccumulator& w = windows[window_index];
    ++w.total;
    if (is_lost) {
      ++lost;
      ++w.lost;
    } else {
      ++played;
      played_delay_sum += playout_delay;
      w.played_delay_sum += playout_delay;
    }
  }

  SimulationResult result;
  RunMetrics& m = result.metrics;
  m.played_count = played;
  m.lost_count = lost;
  m.avg_playout_delay_ms = played > 0 ? played_delay_sum / played : 0.0;
  m.loss_pct = 100.0 * static_cast<double>(lost) /
               static_cast<double>(trace.packets.size());
  const ConversationalQuality q =
      conversational_mos(m.avg_playout_delay_ms, m.loss_pct, quality);
  m.r_factor = q.r.value;
  m.mos = q.mos.value;

  result.timeseries.window_ms = window_ms;
  result.timeseries.points.reserve(n_windows);
  for (std::size_t i = 0; i < n_windows; ++i) {
    const WindowAccumulator& w = windows[i];
    MosWindow point;
    point.window_start_ms = static_cast<double>(i) * window_ms;
    const std::int64_t played_in_window = w.total - w.lost;
    point.avg_delay_ms =
        played_in_window > 0 ? w.played_delay_sum / played_in_window : 0.0;
    point.loss_pct =
        w.total > 0 ? 100.0 * static_cast<double>(w.lost) / w.total : 0.0;
    point.mos =
        conversational_mos(point.avg_delay_ms, point.loss_pct, quality).mos.value;
    result.timeseries.points.push_back(point);
  }
  return result;
}

SimulationResult simulate(const DelayTrace& trace, const SimulationConfig& config) {
  const auto estimator =
      make_estimator(config.algorithm_id, config.algorithm_params);
  return simulate_with(trace, *estimator, config.window_ms, config.quality);
}

std::vector<CompareRow> compare(const DelayTrace& trace,
                                const std::vector<SimulationConfig>& configs) {
  if (configs.empty()) {
    throw std::invalid_argument("compare: need at least one config");
  }
  std::vector<CompareRow> rows;
  rows.reserve(configs.size());
  for (const SimulationConfig& config : configs) {
    try {
      rows.push_back(CompareRow{config.algorithm_id,
                                simulate(trace, config).metrics});
    } catch (const std::exception& e) {
      throw std::runtime_error("algorithm '" + config.algorithm_id +
                               "': " + e.what());
    }
  }
  return rows;
}

nlohmann::ordered_json to_json(const RunMetrics& metrics) {
  return nlohmann::ordered_json{
      {"avg_playout_delay_ms", metrics.avg_playout_delay_ms},
      {"loss_pct", metrics.loss_pct},
      {"r_factor", metrics.r_factor},
      {"mos", metrics.mos},
      {"played_count", metrics.played_count},
      {"lost_count", metrics.lost_count},
  };
}

nlohmann::ordered_json to_json(const MosTimeseries& series) {
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const MosWindow& p : series.points) {
    points.push_back(nlohmann::ordered_json{
        {"window_start_ms", p.window_start_ms},
        {"mos", p.mos},
        {"loss_pct", p.loss_pct},
        {"avg_delay_ms", p.avg_delay_ms},
    });
  }
  return nlohmann::ordered_json{{"window_ms", series.window_ms},
                                {"points", std::move(points)}};
}

void write_timeseries_csv(std::ostream& out, const MosTimeseries& series) {
  out << "window_start_ms,mos,loss_pct,avg_delay_ms\n";
  char buf[160];
  for (const MosWindow& p : series.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  p.window_start_ms, p.mos, p.loss_pct, p.avg_delay_ms);
    out << buf;
  }
}

}  // namespace playoutsim
