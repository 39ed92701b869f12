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

#ifndef PLAYOUTSIM_PACKET_HPP_
#define PLAYOUTSIM_PACKET_HPP_

#include <cstdint>

namespace playoutsim {

// One voice packet as observed at the receiver. Delays are one-way network
// delays in milliseconds; sequence numbers are contiguous from 0 within a
// trace and talkspurt runs are contiguous.
struct PacketObservation {
  std::int64_t seq = 0;
  double send_time_ms = 0.0;
  double network_delay_ms = 0.0;
  std::int64_t talkspurt_id = 0;
  bool is_talkspurt_start = false;
};

}  // namespace playoutsim

#endif  // PLAYOUTSIM_PACKET_HPP_
