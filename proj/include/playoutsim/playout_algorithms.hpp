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

#ifndef PLAYOUTSIM_PLAYOUT_ALGORITHMS_HPP_
#define PLAYOUTSIM_PLAYOUT_ALGORITHMS_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "playoutsim/packet.hpp"

namespace playoutsim {

// Playout delay frozen for one talkspurt.
struct PlayoutDecision {
  std::int64_t talkspurt_id = 0;
  double playout_delay_ms = 0.0;  // clamped to >= 0
};

// Exponential averaging of delay and variation:
//   d <- a d + (1-a) n,   v <- a v + (1-a) |d - n|   (v uses the updated d),
// playout = d + 4v. The first packet seeds d = n, v = 0.
struct ExpAvgState {
  double alpha = 0.998002;
  double d = 0.0;
  double v = 0.0;
  bool initialized = false;

  void update(const PacketObservation& obs);
  double playout_delay() const;
};

// Per-talkspurt minimum delay. The finished talkspurt's minimum predicts the
// next talkspurt's playout; the variation estimate reuses the exponential
// recurrence against the running minimum. First talkspurt falls back to the
// first packet's delay.
struct MinDState {
  double alpha = 0.998002;
  double current_min = 0.0;
  double prev_talkspurt_min = 0.0;
  double v = 0.0;
  std::int64_t talkspurt_packets = 0;
  bool initialized = false;

  void update(const PacketObservation& obs);
  double playout_delay() const;
};

enum class SpikeMode { kNormal, kSpike };

// Two-mode spike detector. In NORMAL mode the estimate follows the
// exponential recurrences with a fast weight; a jump beyond 2|v| + entry
// margin switches to SPIKE mode, where the estimate tracks delay deltas and
// a decaying curvature variable gates the return to NORMAL:
//   var <- var/2 + |2 n_i - n_{i-1} - n_{i-2}| / 8,  exit once var <= 63.
// The first two packets only seed the delay history.
struct SpikeDetState {
  double alpha = 0.875;
  double spike_entry_margin = 800.0;
  double spike_exit_threshold = 63.0;
  SpikeMode mode = SpikeMode::kNormal;
  double d = 0.0;
  double v = 0.0;
  double var = 0.0;
  double n_prev = 0.0;
  double n_prev2 = 0.0;
  int packets_seen = 0;

  void update(const PacketObservation& obs);
  double playout_delay() const;
};

// Direction of the sliding-window variance update. kCorrected removes the
// evicted squared deviation and adds the newest one; kPaperLiteral applies
// the opposite signs and is kept for auditing only (its V can go negative;
// the step size uses sqrt(max(V, 0)) either way).
enum class VarianceUpdate { kCorrected, kPaperLiteral };

// Variance/threshold estimator. Each packet's deviation from the window mean
// feeds a sliding-window variance V; in NORMAL mode the playout estimate
// moves by one step sqrt(V) per packet, downward when the previous delay
// exceeded threshold x the current delay, upward otherwise, and is kept
// inside the window's observed delay envelope (min .. max + step). The
// threshold is re-selected at each talkspurt start from the finished
// talkspurt's delay extrema: 1.75 if max > 3 min, 1.5 if max > 1.5 min,
// else 1.1. A delay above head x estimate switches to SPIKE mode, where the
// playout follows the packet delay itself and the window, V and d are left
// untouched; delay falling back to tail x the pre-spike estimate exits.
struct SuggestedState {
  std::size_t window_n = 50;
  double head = 2.0;
  double tail = 1.2;
  VarianceUpdate variance_update = VarianceUpdate::kCorrected;

  SpikeMode mode = SpikeMode::kNormal;
  double d = 0.0;
  double variance = 0.0;
  double threshold = 1.1;
  double ts_max = 0.0;
  double ts_min = 0.0;
  double old_d = 0.0;
  double last_delay = 0.0;
  bool initialized = false;

  struct WindowSample {
    double delay = 0.0;
    double deviation = 0.0;
  };
  std::deque<WindowSample> window;
  double window_delay_sum = 0.0;

  void update(const PacketObservation& obs);
  double playout_delay() const;
};

// Uniform per-packet interface the simulator drives. update() must see every
// received packet in order; playout_delay_ms() is read once per talkspurt,
// at its first packet, after that packet's update.
class PlayoutEstimator {
 public:
  virtual ~PlayoutEstimator() = default;
  virtual void update(const PacketObservation& obs) = 0;
  virtual double playout_delay_ms() const = 0;
  virtual const std::string& id() const = 0;

  PlayoutDecision decide(std::int64_t talkspurt_id) const {
    return PlayoutDecision{talkspurt_id, playout_delay_ms()};
  }
};

using AlgorithmParams = std::map<std::string, std::string>;

// Registered identifiers: "exp-avg", "min-d", "spike-det", "suggested".
std::vector<std::string> algorithm_ids();

// Builds an estimator by identifier. Accepted parameters:
//   exp-avg:   alpha
//   min-d:     alpha
//   spike-det: alpha, spike_entry_margin, spike_exit_threshold
//   suggested: window_n, head, tail, variance_update (corrected|paper-literal)
// Throws std::invalid_argument on unknown ids, unknown keys or bad values.
std::unique_ptr<PlayoutEstimator> make_estimator(const std::string& algorithm_id,
                                                 const AlgorithmParams& params = {});

}  // namespace playoutsim

#endif  // PLAYOUTSIM_PLAYOUT_ALGORITHMS_HPP_
