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

#include "playoutsim/quality_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace playoutsim {
namespace {

void check_params(const QualityParams& p) {
  if (!(p.r_floor < p.r_ceil)) {
    throw std::invalid_argument("quality params: r_floor must be below r_ceil");
  }
  if (!std::isfinite(p.r0) || p.r0 <= 0.0 || p.r0 > 100.0) {
    throw std::invalid_argument("quality params: r0 must be finite in (0, 100]");
  }
}

}  // namespace

Mos mos_from_r(RFactor r, MosMapping map) {
  if (!std::isfinite(r.value)) {
    throw std::invalid_argument("mos_from_r: R must be finite");
  }
  if (r.value <= 0.0) return Mos{1.0};
  if (r.value >= 100.0) return Mos{4.5};
  const double x = r.value;
  const double m = map == MosMapping::kStandard
                       ? 1.0 + 0.035 * x + x * (x - 60.0) * (100.0 - x) * 7e-6
                       : 1.0 + 0.035 * x + x * (x - 60.0) * 7e-6;
  return Mos{std::clamp(m, 1.0, 4.5)};
}

RFactor r_from_mos(Mos mos, const QualityParams& params) {
  check_params(params);
  const double m = mos.value;
  if (!std::isfinite(m) || m < 1.0 || m > 4.5) {
    throw std::invalid_argument("r_from_mos: MOS must lie in [1.0, 4.5]");
  }
  const double r = ((3.026 * m - 25.314) * m + 87.060) * m - 57.336;
  return RFactor{std::clamp(r, params.r_floor, params.r_ceil)};
}

double delay_impairment(double ta_ms, const QualityParams& params) {
  if (!std::isfinite(ta_ms) || ta_ms < 0.0) {
    throw std::invalid_argument("delay_impairment: delay must be finite and >= 0");
  }
  double id = params.id_slope * ta_ms;
  if (ta_ms >= params.id_knee_ms) {
    id += params.id_excess_slope * (ta_ms - params.id_knee_ms);
  }
  return id;
}

double loss_impairment(double loss_pct, const QualityParams& params) {
  if (!std::isfinite(loss_pct) || loss_pct < 0.0) {
    throw std::invalid_argument("loss_impairment: loss must be finite and >= 0");
  }
  // log1p keeps the tiny-loss regime accurate.
  return params.ie_a * std::log1p(params.ie_b * loss_pct) + params.ie_c;
}

ConversationalQuality conversational_mos(double avg_playout_delay_ms,
                                         double loss_pct,
                                         const QualityParams& params) {
  check_params(params);
  const double r = params.r0 - loss_impairment(loss_pct, params) -
                   delay_impairment(avg_playout_delay_ms, params);
  ConversationalQuality q;
  q.mos = mos_from_r(RFactor{r}, params.mos_map);
  q.r = RFactor{std::clamp(r, params.r_floor, params.r_ceil)};
  return q;
}

double ie_from_listening_mos(Mos listening_mos, const QualityParams& params) {
  const RFactor r = r_from_mos(listening_mos, params);
  return std::max(0.0, params.r0 - r.value);
}

}  // namespace playoutsim
