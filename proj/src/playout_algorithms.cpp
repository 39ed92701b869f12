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

#include "playoutsim/playout_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace playoutsim {
namespace {

void check_observation(const PacketObservation& obs) {
  if (!std::isfinite(obs.network_delay_ms) || obs.network_delay_ms < 0.0) {
    throw std::invalid_argument("packet delay must be finite and >= 0");
  }
}

double require_initialized(bool initialized, double value) {
  if (!initialized) {
    throw std::logic_error("playout delay requested before any observation");
  }
  return std::max(0.0, value);
}

}  // namespace

void ExpAvgState::update(const PacketObservation& obs) {
  check_observation(obs);
  const double n = obs.network_delay_ms;
  if (!initialized) {
    d = n;
    v = 0.0;
    initialized = true;
    return;
  }
  d = alpha * d + (1.0 - alpha) * n;
  v = alpha * v + (1.0 - alpha) * std::fabs(d - n);
}

double ExpAvgState::playout_delay() const {
  return require_initialized(initialized, d + 4.0 * v);
}

void MinDState::update(const PacketObservation& obs) {
  check_observation(obs);
  const double n = obs.network_delay_ms;
  if (!initialized) {
    current_min = n;
    prev_talkspurt_min = n;  // no earlier talkspurt to predict from
    v = 0.0;
    talkspurt_packets = 1;
    initialized = true;
    return;
  }
  if (obs.is_talkspurt_start) {
    prev_talkspurt_min = current_min;
    current_min = n;
    talkspurt_packets = 1;
  } else {
    current_min = std::min(current_min, n);
    ++talkspurt_packets;
  }
  v = alpha * v + (1.0 - alpha) * std::fabs(current_min - n);
}

double MinDState::playout_delay() const {
  return require_initialized(initialized, prev_talkspurt_min + 4.0 * v);
}

void SpikeDetState::update(const PacketObservation& obs) {
  check_observation(obs);
  const double n = obs.network_delay_ms;
  if (packets_seen == 0) {
    d = n;
    v = 0.0;
    n_prev = n;
    packets_seen = 1;
    return;
  }
  if (packets_seen == 1) {
    // Second packet completes the delay history; no mode logic yet.
    d = alpha * d + (1.0 - alpha) * n;
    v = alpha * v + (1.0 - alpha) * std::fabs(d - n);
    n_prev2 = n_prev;
    n_prev = n;
    packets_seen = 2;
    return;
  }

  if (mode == SpikeMode::kNormal) {
    if (std::fabs(n - n_prev) > 2.0 * std::fabs(v) + spike_entry_margin) {
      var = 0.0;
      mode = SpikeMode::kSpike;
    } else {
      var = var / 2.0 + std::fabs(2.0 * n - n_prev - n_prev2) / 8.0;
    }
  } else {
    var = var / 2.0 + std::fabs(2.0 * n - n_prev - n_prev2) / 8.0;
    if (var <= spike_exit_threshold) {
      mode = SpikeMode::kNormal;
    }
  }

  if (mode == SpikeMode::kNormal) {
    d = alpha * d + (1.0 - alpha) * n;
  } else {
    d = d + (n - n_prev);
  }
  v = alpha * v + (1.0 - alpha) * std::fabs(d - n);
  n_prev2 = n_prev;
  n_prev = n;
}

double SpikeDetState::playout_delay() const {
  return require_initialized(packets_seen > 0, d + 4.0 * v);
}

void SuggestedState::update(const PacketObservation& obs) {
  check_observation(obs);
  const double n = obs.network_delay_ms;
  const bool first = !initialized;
  if (first) {
    d = n;
    initialized = true;
  }

  if (obs.is_talkspurt_start && !first) {
    // Threshold from the just-finished talkspurt's extrema, before reset.
    if (ts_max > 3.0 * ts_min) {
      threshold = 1.75;
    } else if (ts_max > 1.5 * ts_min) {
      threshold = 1.5;
    } else {
      threshold = 1.1;
    }
  }
  if (obs.is_talkspurt_start || first) {
    ts_max = n;
    ts_min = n;
  } else {
    ts_max = std::max(ts_max, n);
    ts_min = std::min(ts_min, n);
  }

  // Mode machine first: spike packets bypass the window statistics entirely,
  // so one outlier cannot widen V for a whole window length.
  if (mode == SpikeMode::kNormal && !first && n > head * d) {
    mode = SpikeMode::kSpike;
    old_d = d;
    last_delay = n;
    return;
  }
  if (mode == SpikeMode::kSpike) {
    if (n <= tail * old_d) {
      mode = SpikeMode::kNormal;  // fall through and process normally
    } else {
      last_delay = n;
      return;
    }
  }

  const double mean =
      window.empty() ? n : window_delay_sum / static_cast<double>(window.size());
  const double deviation = n - mean;
  double evicted_deviation = 0.0;
  if (window.size() == window_n) {
    const WindowSample& oldest = window.front();
    window_delay_sum -= oldest.delay;
    evicted_deviation = oldest.deviation;
    window.pop_front();
  }
  window.push_back(WindowSample{n, deviation});
  window_delay_sum += n;

  const double delta = (deviation * deviation -
                        evicted_deviation * evicted_deviation) /
                       static_cast<double>(window_n);
  if (variance_update == VarianceUpdate::kCorrected) {
    variance = std::max(0.0, variance + delta);
  } else {
    variance -= delta;  // printed form; may run negative
  }

  const double sign =
      (!first && !obs.is_talkspurt_start && last_delay > threshold * n) ? -1.0
                                                                        : 1.0;
  const double step = std::sqrt(std::max(0.0, variance));

  double window_min = window.front().delay;
  double window_max = window.front().delay;
  for (const WindowSample& s : window) {
    window_min = std::min(window_min, s.delay);
    window_max = std::max(window_max, s.delay);
  }
  // One step per packet, held inside the observed delay envelope. The upper
  // bound keeps the walk from ratcheting away when downward steps are rare;
  // the lower bound keeps the spike-exit test satisfiable.
  d = std::clamp(d + step * sign, std::max(0.0, window_min), window_max + step);

  last_delay = n;
}

double SuggestedState::playout_delay() const {
  return require_initialized(initialized,
                             mode == SpikeMode::kNormal ? d : last_delay);
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const AlgorithmParams& params) : params_(params) {}

  double number(const std::string& key, double fallback) {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    consumed_.push_back(key);
    try {
      std::size_t pos = 0;
      const double value = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return value;
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter '" + key + "': not a number: '" +
                                  it->second + "'");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    consumed_.push_back(key);
    return it->second;
  }

  void finish(const std::string& algorithm_id) const {
    for (const auto& [key, value] : params_) {
      if (std::find(consumed_.begin(), consumed_.end(), key) ==
          consumed_.end()) {
        throw std::invalid_argument("algorithm '" + algorithm_id +
                                    "': unknown parameter '" + key + "'");
      }
    }
  }

 private:
  const AlgorithmParams& params_;
  std::vector<std::string> consumed_;
};

double checked_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("parameter 'alpha' must lie in (0, 1)");
  }
  return alpha;
}

template <typename State>
class StateEstimator final : public PlayoutEstimator {
 public:
  StateEstimator(std::string id, State state)
      : id_(std::move(id)), state_(std::move(state)) {}

  void update(const PacketObservation& obs) override { state_.update(obs); }
  double playout_delay_ms() const override { return state_.playout_delay(); }
  const std::string& id() const override { return id_; }

 private:
  std::string id_;
  State state_;
};

}  // namespace

std::vector<std::string> algorithm_ids() {
  return {"exp-avg", "min-d", "spike-det", "suggested"};
}

std::unique_ptr<PlayoutEstimator> make_estimator(const std::string& algorithm_id,
                                                 const AlgorithmParams& params) {
  ParamReader reader(params);
  if (algorithm_id == "exp-avg") {
    ExpAvgState state;
    state.alpha = checked_alpha(reader.number("alpha", state.alpha));
    reader.finish(algorithm_id);
    return std::make_unique<StateEstimator<ExpAvgState>>(algorithm_id, state);
  }
  if (algorithm_id == "min-d") {
    MinDState state;
    state.alpha = checked_alpha(reader.number("alpha", state.alpha));
    reader.finish(algorithm_id);
    return std::make_unique<StateEstimator<MinDState>>(algorithm_id, state);
  }
  if (algorithm_id == "spike-det") {
    SpikeDetState state;
    state.alpha = checked_alpha(reader.number("alpha", state.alpha));
    state.spike_entry_margin =
        reader.number("spike_entry_margin", state.spike_entry_margin);
    state.spike_exit_threshold =
        reader.number("spike_exit_threshold", state.spike_exit_threshold);
    if (state.spike_entry_margin < 0.0 || state.spike_exit_threshold < 0.0) {
      throw std::invalid_argument("spike margins must be >= 0");
    }
    reader.finish(algorithm_id);
    return std::make_unique<StateEstimator<SpikeDetState>>(algorithm_id, state);
  }
  if (algorithm_id == "suggested") {
    SuggestedState state;
    const double window_n = reader.number("window_n", static_cast<double>(state.window_n));
    if (window_n < 1.0 || window_n != std::floor(window_n)) {
      throw std::invalid_argument("parameter 'window_n' must be a positive integer");
    }
    state.window_n = static_cast<std::size_t>(window_n);
    state.head = reader.number("head", state.head);
    state.tail = reader.number("tail", state.tail);
    if (state.head <= 0.0 || state.tail <= 0.0) {
      throw std::invalid_argument("parameters 'head' and 'tail' must be > 0");
    }
    const std::string mode = reader.text("variance_update", "corrected");
    if (mode == "corrected") {
      state.variance_update = VarianceUpdate::kCorrected;
    } else if (mode == "paper-literal") {
      state.variance_update = VarianceUpdate::kPaperLiteral;
    } else {
      throw std::invalid_argument(
          "parameter 'variance_update' must be 'corrected' or 'paper-literal'");
    }
    reader.finish(algorithm_id);
    return std::make_unique<StateEstimator<SuggestedState>>(algorithm_id, state);
  }
  throw std::invalid_argument("unknown algorithm id '" + algorithm_id + "'");
}

}  // namespace playoutsim
