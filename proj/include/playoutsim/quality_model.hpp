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

#ifndef PLAYOUTSIM_QUALITY_MODEL_HPP_
#define PLAYOUTSIM_QUALITY_MODEL_HPP_

namespace playoutsim {

// How the R factor maps to MOS on the open interval 0 < R < 100.
//
// kStandard uses the usual three-factor curve
//     MOS = 1 + 0.035 R + R (R - 60) (100 - R) * 7e-6,
// which is continuous at R = 100 and crosses MOS = 1 near R = 6.5.
// kPaperLiteral drops the (100 - R) factor. It is kept for auditing old
// result sets; it under-penalizes low R and is discontinuous at R = 100.
enum class MosMapping { kStandard, kPaperLiteral };

// E-model constants. Defaults follow the common narrowband parameterization:
// R0 = 93.2, Ie fitted against random loss in percent, Id with the 177.3 ms
// knee, and reported R restricted to [6.5, 100].
struct QualityParams {
  double r0 = 93.2;
  double ie_a = 20.06;            // multiplier of the log loss term
  double ie_b = 0.1024;           // per percent of loss
  double ie_c = 25.63;            // zero-loss equipment impairment
  double id_slope = 0.024;        // R-units per ms of one-way delay
  double id_knee_ms = 177.3;      // knee of the delay impairment
  double id_excess_slope = 0.11;  // extra R-units per ms beyond the knee
  double r_floor = 6.5;
  double r_ceil = 100.0;
  MosMapping mos_map = MosMapping::kStandard;
};

// Transmission rating. Unclamped unless noted otherwise.
struct RFactor {
  double value = 0.0;
};

// Mean opinion score, always within [1.0, 4.5] when produced here.
struct Mos {
  double value = 1.0;
};

struct Impairments {
  double ie = 0.0;
  double id = 0.0;
};

struct ConversationalQuality {
  RFactor r;
  Mos mos;
};

// R -> MOS. Exactly 1.0 for R <= 0 and 4.5 for R >= 100; the middle branch
// is clamped into [1.0, 4.5]. Throws std::invalid_argument on non-finite R.
Mos mos_from_r(RFactor r, MosMapping map = MosMapping::kStandard);

// MOS -> R via the third-order fit
//     R = 3.026 MOS^3 - 25.314 MOS^2 + 87.060 MOS - 57.336,
// clamped to [r_floor, r_ceil]. MOS must lie in [1.0, 4.5].
RFactor r_from_mos(Mos mos, const QualityParams& params = {});

// Id(Ta) = slope * Ta + excess_slope * (Ta - knee) for Ta at or beyond the
// knee. Ta is the absolute one-way playout delay in ms, >= 0.
double delay_impairment(double ta_ms, const QualityParams& params = {});

// Ie(loss) = ie_a * ln(1 + ie_b * loss) + ie_c. Loss is in percent, >= 0.
double loss_impairment(double loss_pct, const QualityParams& params = {});

// The conversational chain: R = R0 - Ie(loss) - Id(delay), MOS = mos_from_r.
// The returned R is range-restricted to [r_floor, r_ceil]; the MOS is taken
// from the unrestricted R (identical result, since the map saturates first).
ConversationalQuality conversational_mos(double avg_playout_delay_ms,
                                         double loss_pct,
                                         const QualityParams& params = {});

// Bridge for an externally measured listening MOS: the equipment impairment
// is whatever rating the listening path already gave up relative to R0,
// ie = max(0, r0 - r_from_mos(listening_mos)).
double ie_from_listening_mos(Mos listening_mos, const QualityParams& params = {});

}  // namespace playoutsim

#endif  // PLAYOUTSIM_QUALITY_MODEL_HPP_
