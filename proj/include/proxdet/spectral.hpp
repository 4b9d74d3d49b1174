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
#ifndef PROXDET_SPECTRAL_HPP
#define PROXDET_SPECTRAL_HPP

#include "proxdet/csi.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace proxdet {

inline constexpr double kSpeedOfLight = 299'792'458.0;
// Location of the first maximum of J1, i.e. the first extremum of d/dx J0(x).
inline constexpr double kBesselJ1FirstMax = 1.8411837813406593;

struct AcfParams {
    double window_s = 0.3;          // ACF estimation window
    double hop_s = 0.1;             // spacing of consecutive windows
    double max_lag_s = 0.15;        // largest lag evaluated
    double prominence_floor = 0.2;  // on the max-normalized lag differential
};

// Per-subcarrier sample autocorrelation, lag-major: values[lag * num_subcarriers + s].
struct SubcarrierAcf {
    double lag_step = 0.0;  // seconds
    std::size_t num_lags = 0;  // includes lag 0
    std::size_t num_subcarriers = 0;
    std::vector<double> values;
    std::vector<bool> has_variance;

    double at(std::size_t lag, std::size_t subcarrier) const { return values[lag * num_subcarriers + subcarrier]; }
};

struct AcfResult {
    double window_end = 0.0;
    std::vector<double> lags;      // seconds, lags[0] = 0
    std::vector<double> acf;       // acf[0] = 1 when valid
    std::vector<double> acf_diff;  // 1/s, one per lag except the last
    std::vector<double> per_subcarrier_weight;
    bool valid = false;            // false when no subcarrier carried motion
};

struct SpeedEstimate {
    double v_hat = 0.0;              // m/s
    double valley_lag = 0.0;         // s
    double peak_prominence = 0.0;    // normalized differential units
    double valley_prominence = 0.0;
    double swing = 0.0;              // differential at the peak minus at the valley
    bool found = false;
};

// Mean-removed autocorrelation via zero-padded real FFTs. Holds FFTW plans and buffers;
// not thread-safe, one instance per thread.
class AcfEngine {
public:
    AcfEngine(std::size_t window_len, std::size_t max_lag);
    ~AcfEngine();
    AcfEngine(const AcfEngine &) = delete;
    AcfEngine &operator=(const AcfEngine &) = delete;

    std::size_t window_len() const { return n_; }
    std::size_t max_lag() const { return max_lag_; }

    // rho[l] = sum_t (x_t - m)(x_{t+l} - m) / ((n - l) s^2) for l = 0..max_lag, clipped to
    // [-1, 1]. Returns false (and zeros) when the window has no variance.
    bool compute(std::span<const double> x, std::span<double> rho);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_;
    std::size_t max_lag_;
};

SubcarrierAcf acf_per_subcarrier(const PowerSeries &window, double max_lag_s);
SubcarrierAcf acf_per_subcarrier(const PowerSeries &window, double max_lag_s, AcfEngine &engine);

// Weighted combination over subcarriers with weights max(rho_f(1 sample), 0) / sum.
AcfResult combine_acf(const SubcarrierAcf &per_subcarrier, double window_end);

// Builds an AcfResult directly from a combined ACF curve (single unit weight).
AcfResult make_acf_result(std::vector<double> lags, std::vector<double> acf, double window_end = 0.0);

// Central differences over lag, forward difference at lag 0; length lags.size() - 1.
std::vector<double> lag_differential(std::span<const double> lags, std::span<const double> acf);

// Speed from the first valley of the lag differential of the ACF (R ~ J0(k v dt)).
SpeedEstimate estimate_speed(const AcfResult &acf, double wave_number, double prominence_floor = 0.2);

double wave_number(double center_freq);

} // namespace proxdet

#endif
