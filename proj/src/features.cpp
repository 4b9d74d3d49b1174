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
#include "proxdet/features.hpp"

#include "proxdet/diagnostics.hpp"
#include "proxdet/peaks.hpp"

#include <cmath>
#include <numbers>

namespace proxdet {

double pearson(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty())
        throw ParameterError("pearson needs two non-empty series of equal length");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        return 0.0;
    return sab / std::sqrt(saa * sbb);
}

double proximity_feature(const PowerSeries &window)
{
    if (window.num_subcarriers < 2)
        throw ParameterError("proximity feature needs at least 2 subcarriers");
    if (window.size() < 10)
        throw ParameterError("proximity feature needs at least 10 samples");
    std::vector<double> prev = window.subcarrier(0);
    double sum = 0.0;
    for (std::size_t s = 1; s < window.num_subcarriers; ++s) {
        std::vector<double> cur = window.subcarrier(s);
        sum += pearson(prev, cur);
        prev = std::move(cur);
    }
    return sum / static_cast<double>(window.num_subcarriers - 1);
}

ReadyValue slope(std::span<const TimedValue> history, double window_s)
{
    if (history.empty())
        return {};
    const double now = history.back().t;
    std::size_t first = history.size();
    while (first > 0 && history[first - 1].t > now - window_s - 1e-9)
        --first;
    auto tail = history.subspan(first);
    if (tail.size() < 3)
        return {};
    double tm = 0.0, vm = 0.0;
    for (const auto &p : tail) {
        tm += p.t;
        vm += p.value;
    }
    tm /= static_cast<double>(tail.size());
    vm /= static_cast<double>(tail.size());
    double stv = 0.0, stt = 0.0;
    for (const auto &p : tail) {
        stv += (p.t - tm) * (p.value - vm);
        stt += (p.t - tm) * (p.t - tm);
    }
    if (!(stt > 0.0))
        return {};
    return {stv / stt, true};
}

double walking_speed_probability(double v, const GaitParams &params)
{
    const double z = (v - params.mean_speed) / params.std_speed;
    // 1 - 2|Phi(z) - 1/2| = erfc(|z| / sqrt 2), evaluated without cancellation.
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

ReadyValue gait_cycle_rate(std::span<const TimedValue> speeds, double window_s, double min_prominence)
{
    if (speeds.empty() || !(window_s > 0.0))
        return {};
    const double now = speeds.back().t;
    if (now - speeds.front().t < window_s - 1e-9)
        return {};
    std::vector<double> v, t;
    v.reserve(speeds.size());
    t.reserve(speeds.size());
    for (const auto &s : speeds) {
        if (std::isfinite(s.value)) {
            v.push_back(s.value);
            t.push_back(s.t);
        }
    }
    std::size_t count = 0;
    for (const auto &p : find_peaks(v, min_prominence))
        count += t[p.index] > now - window_s - 1e-9;
    return {static_cast<double>(count) / window_s, true};
}

double gait_score(const SpeedEstimate &est, double c, const GaitParams &params)
{
    if (!est.found || !std::isfinite(c) || !std::isfinite(est.v_hat))
        return 0.0;
    const double w = est.swing;
    if (!(w > 0.0))
        return 0.0;
    if (c < params.c_min || c > params.c_max)
        return 0.0;
    return w * walking_speed_probability(est.v_hat, params);
}

} // namespace proxdet
