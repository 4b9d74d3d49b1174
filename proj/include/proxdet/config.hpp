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
#ifndef PROXDET_CONFIG_HPP
#define PROXDET_CONFIG_HPP

#include "proxdet/features.hpp"
#include "proxdet/fsm.hpp"
#include "proxdet/spectral.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace proxdet {

struct HampelParams {
    std::size_t window = 31;  // samples of the downsampled stream
    double n_sigmas = 3.0;

    bool operator==(const HampelParams &) const = default;
};

struct PipelineConfig {
    double sample_rate = 1500.0;   // Hz, capture rate
    double downsample_to = 30.0;   // Hz, proximity branch rate
    double center_freq = 5.18e9;   // Hz
    double bandwidth = 40e6;       // Hz
    HampelParams hampel;
    AcfParams acf;
    double fp_window_s = 1.0;       // Pearson window of the proximity feature
    double slope_window_s = 0.5;    // OLS window of the fp slope
    double gait_window_s = 2.0;     // trailing window for the gait-cycle rate
    double gait_min_prominence = 0.1;  // m/s, speed peaks counted as gait cycles
    double estimate_hold_s = 0.2;   // a missing speed estimate reuses the last one this long
    GaitParams gait;
    FsmConfig fsm;
    double proximate_radius = 1.5;  // m
    double jitter_tolerance = 0.1;  // relative timestamp jitter before warning

    std::size_t downsample_factor() const;
    std::vector<std::string> violations() const;
};

// Parses a JSON document; absent fields keep their defaults. Throws ParameterError
// listing every violation.
PipelineConfig config_from_json(const std::string &text);
std::string config_to_json(const PipelineConfig &cfg);

bool same_config(const PipelineConfig &a, const PipelineConfig &b);

} // namespace proxdet

#endif
