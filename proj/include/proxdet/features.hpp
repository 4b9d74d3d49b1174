// SPDX-License-Identifier: Apache-2.0
//
// proxdet - WiFi CSI proximity detection with gait monitoring
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#ifndef PROXDET_FEATURES_HPP
#define PROXDET_FEATURES_HPP

#include "proxdet/csi.hpp"
#include "proxdet/spectral.hpp"

#include <span>
#include <vector>

namespace proxdet {

// Population walking-speed statistics and the plausible gait-cycle band.
struct GaitParams {
    double mean_speed = 1.34;  // m/s
    double std_speed = 0.37;   // m/s
    double c_min = 0.5;        // cycles/s
    double c_max = 1.5;        // cycles/s
};

struct FeatureSample {
    double t = 0.0;
    double fp = 0.0;     // proximity feature
    double fs = 0.0;     // slope of fp, 1/s
    double v_hat = 0.0;  // m/s
    double c = 0.0;      // gait cycles per second
    double fg = 0.0;     // gait score
};

struct TimedValue {
    double t = 0.0;
    double value = 0.0;
};

struct ReadyValue {
    double value = 0.0;
    bool ready = false;
};

// Pearson correlation of two equally long series; 0 when either has no variance.
double pearson(std::span<const double> a, std::span<const double> b);

// Mean adjacent-subcarrier Pearson correlation over the window.
double proximity_feature(const PowerSeries &window);

// OLS slope of the trailing `window_s` seconds of history (last sample is "now").
ReadyValue slope(std::span<const TimedValue> history, double window_s);

// 1 - 2 |Phi((v - mean) / std) - 0.5|.
double walking_speed_probability(double v, const GaitParams &params = {});

// Prominent peaks of the speed series in the trailing window divided by window length.
// Prominence is measured over the whole series, so history older than the window only
// serves as context. Non-finite values mark ticks without an estimate and are skipped.
ReadyValue gait_cycle_rate(std::span<const TimedValue> speeds, double window_s, double min_prominence = 0.1);

// w * p(v) * 1(w > 0) * 1(c_min <= c <= c_max), w = peak-valley swing of the lag differential.
double gait_score(const SpeedEstimate &est, double c, const GaitParams &params = {});

} // namespace proxdet

#endif
