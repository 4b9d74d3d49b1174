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
#include "proxdet/config.hpp"

#include "proxdet/diagnostics.hpp"

#include <json.hpp>

#include <cmath>

namespace proxdet {

using nlohmann::json;

std::size_t PipelineConfig::downsample_factor() const
{
    return static_cast<std::size_t>(std::llround(sample_rate / downsample_to));
}

std::vector<std::string> PipelineConfig::violations() const
{
    std::vector<std::string> v;
    auto positive = [&](const char *name, double x) {
        if (!(x > 0.0) || !std::isfinite(x))
            v.push_back(std::string(name) + " must be positive");
    };
    positive("sample_rate", sample_rate);
    positive("downsample_to", downsample_to);
    positive("center_freq", center_freq);
    positive("bandwidth", bandwidth);
    positive("acf.window_s", acf.window_s);
    positive("acf.hop_s", acf.hop_s);
    positive("acf.max_lag_s", acf.max_lag_s);
    positive("acf.prominence_floor", acf.prominence_floor);
    positive("fp_window_s", fp_window_s);
    positive("slope_window_s", slope_window_s);
    positive("gait_window_s", gait_window_s);
    positive("gait_min_prominence", gait_min_prominence);
    if (!(estimate_hold_s >= 0.0) || !std::isfinite(estimate_hold_s))
        v.push_back("estimate_hold_s must be >= 0");
    positive("gait.std_speed", gait.std_speed);
    positive("proximate_radius", proximate_radius);
    positive("jitter_tolerance", jitter_tolerance);
    if (sample_rate > 0.0 && downsample_to > 0.0) {
        const double ratio = sample_rate / downsample_to;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
            v.push_back("downsample_to must divide sample_rate");
    }
    if (hampel.window < 3 || hampel.window % 2 == 0)
        v.push_back("hampel.window must be odd and >= 3");
    if (!(hampel.n_sigmas > 0.0))
        v.push_back("hampel.n_sigmas must be positive");
    if (acf.window_s > 0.0 && acf.max_lag_s > 0.0 && acf.window_s + 1e-12 < 2.0 * acf.max_lag_s)
        v.push_back("acf.window_s must be at least 2 x acf.max_lag_s");
    if (sample_rate > 0.0 && acf.max_lag_s * sample_rate < 8.0)
        v.push_back("acf.max_lag_s must cover at least 8 samples");
    if (downsample_to > 0.0 && fp_window_s * downsample_to < 10.0)
        v.push_back("fp_window_s must cover at least 10 downsampled frames");
    if (gait_window_s < 2.0)
        v.push_back("gait_window_s must be >= 2 s");
    if (!(gait.c_min < gait.c_max))
        v.push_back("gait.c_min must be below gait.c_max");
    for (auto &f : fsm.violations())
        v.push_back("fsm." + f);
    return v;
}

namespace {

template <class T>
void read_opt(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

PipelineConfig config_from_json(const std::string &text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParameterError("config document must be a JSON object");
    PipelineConfig c;
    try {
        read_opt(j, "sample_rate", c.sample_rate);
        read_opt(j, "downsample_to", c.downsample_to);
        read_opt(j, "center_freq", c.center_freq);
        read_opt(j, "bandwidth", c.bandwidth);
        read_opt(j, "fp_window_s", c.fp_window_s);
        read_opt(j, "slope_window_s", c.slope_window_s);
        read_opt(j, "gait_window_s", c.gait_window_s);
        read_opt(j, "gait_min_prominence", c.gait_min_prominence);
        read_opt(j, "estimate_hold_s", c.estimate_hold_s);
        read_opt(j, "proximate_radius", c.proximate_radius);
        read_opt(j, "jitter_tolerance", c.jitter_tolerance);
        if (j.contains("hampel")) {
            read_opt(j["hampel"], "window", c.hampel.window);
            read_opt(j["hampel"], "n_sigmas", c.hampel.n_sigmas);
        }
        if (j.contains("acf")) {
            const auto &a = j["acf"];
            read_opt(a, "window_s", c.acf.window_s);
            read_opt(a, "hop_s", c.acf.hop_s);
            read_opt(a, "max_lag_s", c.acf.max_lag_s);
            read_opt(a, "prominence_floor", c.acf.prominence_floor);
        }
        if (j.contains("gait")) {
            const auto &g = j["gait"];
            read_opt(g, "mean_speed", c.gait.mean_speed);
            read_opt(g, "std_speed", c.gait.std_speed);
            read_opt(g, "c_min", c.gait.c_min);
            read_opt(g, "c_max", c.gait.c_max);
        }
        if (j.contains("fsm")) {
            const auto &f = j["fsm"];
            read_opt(f, "theta_near", c.fsm.theta_near);
            read_opt(f, "theta_far", c.fsm.theta_far);
            read_opt(f, "theta_gait", c.fsm.theta_gait);
            read_opt(f, "theta_slope", c.fsm.theta_slope);
            read_opt(f, "debounce", c.fsm.debounce);
            read_opt(f, "timeout_approach", c.fsm.timeout_approach);
        }
    } catch (const json::exception &e) {
        throw ParameterError(std::string("config field has the wrong type: ") + e.what());
    }
    auto problems = c.violations();
    if (!problems.empty()) {
        std::string msg = "invalid config:";
        for (const auto &p : problems)
            msg += "\n  - " + p;
        throw ParameterError(msg);
    }
    return c;
}

std::string config_to_json(const PipelineConfig &c)
{
    json j = {
        {"sample_rate", c.sample_rate},
        {"downsample_to", c.downsample_to},
        {"center_freq", c.center_freq},
        {"bandwidth", c.bandwidth},
        {"hampel", {{"window", c.hampel.window}, {"n_sigmas", c.hampel.n_sigmas}}},
        {"acf",
         {{"window_s", c.acf.window_s},
          {"hop_s", c.acf.hop_s},
          {"max_lag_s", c.acf.max_lag_s},
          {"prominence_floor", c.acf.prominence_floor}}},
        {"fp_window_s", c.fp_window_s},
        {"slope_window_s", c.slope_window_s},
        {"gait_window_s", c.gait_window_s},
        {"gait_min_prominence", c.gait_min_prominence},
        {"estimate_hold_s", c.estimate_hold_s},
        {"gait",
         {{"mean_speed", c.gait.mean_speed},
          {"std_speed", c.gait.std_speed},
          {"c_min", c.gait.c_min},
          {"c_max", c.gait.c_max}}},
        {"fsm",
         {{"theta_near", c.fsm.theta_near},
          {"theta_far", c.fsm.theta_far},
          {"theta_gait", c.fsm.theta_gait},
          {"theta_slope", c.fsm.theta_slope},
          {"debounce", c.fsm.debounce},
          {"timeout_approach", c.fsm.timeout_approach}}},
        {"proximate_radius", c.proximate_radius},
        {"jitter_tolerance", c.jitter_tolerance},
    };
    return j.dump(2);
}

bool same_config(const PipelineConfig &a, const PipelineConfig &b)
{
    const auto &fa = a.fsm, &fb = b.fsm;
    return a.sample_rate == b.sample_rate && a.downsample_to == b.downsample_to && a.center_freq == b.center_freq &&
           a.bandwidth == b.bandwidth && a.hampel == b.hampel && a.acf.window_s == b.acf.window_s &&
           a.acf.hop_s == b.acf.hop_s && a.acf.max_lag_s == b.acf.max_lag_s &&
           a.acf.prominence_floor == b.acf.prominence_floor && a.fp_window_s == b.fp_window_s &&
           a.slope_window_s == b.slope_window_s && a.gait_window_s == b.gait_window_s &&
           a.gait_min_prominence == b.gait_min_prominence && a.estimate_hold_s == b.estimate_hold_s &&
           a.gait.mean_speed == b.gait.mean_speed && a.gait.std_speed == b.gait.std_speed && a.gait.c_min == b.gait.c_min && a.gait.c_max == b.gait.c_max &&
           fa.theta_near == fb.theta_near && fa.theta_far == fb.theta_far && fa.theta_gait == fb.theta_gait &&
           fa.theta_slope == fb.theta_slope && fa.debounce == fb.debounce &&
           fa.timeout_approach == fb.timeout_approach && a.proximate_radius == b.proximate_radius &&
           a.jitter_tolerance == b.jitter_tolerance;
}

} // namespace proxdet
