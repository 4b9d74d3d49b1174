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
#include "proxdet/synth.hpp"

#include "proxdet/diagnostics.hpp"
#include "proxdet/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

namespace proxdet {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMovingTimeConstant = 0.2;  // s, body gain change at segment boundaries
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;

} // namespace

std::vector<StaticPath> Scene::default_static_paths()
{
    // Line of sight plus four wall/furniture reflections; ~100 ns delay spread.
    return {
        {std::polar(1.0, 0.0), 20e-9},
        {std::polar(0.5, 1.1), 38e-9},
        {std::polar(0.35, 2.3), 55e-9},
        {std::polar(0.25, -0.7), 80e-9},
        {std::polar(0.15, 0.4), 110e-9},
    };
}

std::vector<std::string> Scene::violations() const
{
    std::vector<std::string> v;
    if (num_subcarriers < 2)
        v.push_back("scene.num_subcarriers must be >= 2");
    if (!(center_freq > 0.0))
        v.push_back("scene.center_freq must be positive");
    if (!(bandwidth > 0.0))
        v.push_back("scene.bandwidth must be positive");
    if (!(sample_rate > 0.0))
        v.push_back("scene.sample_rate must be positive");
    if (!(noise_sigma >= 0.0))
        v.push_back("scene.noise_sigma must be >= 0");
    if (!(dynamic_gain_ref >= 0.0))
        v.push_back("scene.dynamic_gain_ref must be >= 0");
    if (!(path_loss_exponent >= 0.0))
        v.push_back("scene.path_loss_exponent must be >= 0");
    if (num_rays < 1)
        v.push_back("scene.num_rays must be >= 1");
    if (!(delay_offset >= 0.0))
        v.push_back("scene.delay_offset must be >= 0");
    for (const auto &p : static_paths)
        if (!(p.tau >= 0.0) || !std::isfinite(p.alpha.real()) || !std::isfinite(p.alpha.imag()))
            v.push_back("scene.static_paths entries need finite gains and tau >= 0");
    return v;
}

double Trajectory::distance_at(double t) const
{
    if (waypoints.empty())
        return 0.0;
    if (t <= waypoints.front().t)
        return waypoints.front().distance;
    if (t >= waypoints.back().t)
        return waypoints.back().distance;
    auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](double x, const Waypoint &w) { return x < w.t; });
    const Waypoint &b = *it;
    const Waypoint &a = *(it - 1);
    const double u = (t - a.t) / (b.t - a.t);
    return a.distance + u * (b.distance - a.distance);
}

double Trajectory::segment_speed_at(double t) const
{
    if (waypoints.size() < 2 || t < waypoints.front().t || t >= waypoints.back().t)
        return 0.0;
    auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](double x, const Waypoint &w) { return x < w.t; });
    const Waypoint &b = *it;
    const Waypoint &a = *(it - 1);
    return std::abs(b.distance - a.distance) / (b.t - a.t);
}

std::vector<std::string> Trajectory::violations() const
{
    std::vector<std::string> v;
    if (waypoints.empty())
        v.push_back("trajectory.waypoints must not be empty");
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        if (!(waypoints[i].distance > 0.0))
            v.push_back("trajectory distance must be > 0 everywhere (waypoint " + std::to_string(i) + ")");
        if (i > 0 && !(waypoints[i].t > waypoints[i - 1].t))
            v.push_back("trajectory waypoint times must be strictly increasing (waypoint " + std::to_string(i) + ")");
    }
    if (!(gait_rate >= 0.0))
        v.push_back("trajectory.gait_rate must be >= 0");
    if (!(gait_depth >= 0.0 && gait_depth < 1.0))
        v.push_back("trajectory.gait_depth must be in [0, 1)");
    if (!(micro_speed >= 0.0))
        v.push_back("trajectory.micro_speed must be >= 0");
    if (!(micro_gain >= 0.0 && micro_gain <= 1.0))
        v.push_back("trajectory.micro_gain must be in [0, 1]");
    if (!(mean_speed > 0.0))
        v.push_back("trajectory.mean_speed must be positive");
    return v;
}

GroundTruth ground_truth(const Trajectory &traj, double duration, double radius)
{
    GroundTruth truth;
    std::vector<double> nodes{0.0};
    for (const auto &w : traj.waypoints)
        if (w.t > 0.0 && w.t < duration)
            nodes.push_back(w.t);
    nodes.push_back(duration);

    std::vector<GroundTruthEvent> raw;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double t0 = nodes[i], t1 = nodes[i + 1];
        const double d0 = traj.distance_at(t0), d1 = traj.distance_at(t1);
        const bool in0 = d0 <= radius, in1 = d1 <= radius;
        if (!in0 && !in1)
            continue;
        double a = t0, b = t1;
        if (!in0)
            a = t0 + (radius - d0) / (d1 - d0) * (t1 - t0);
        if (!in1)
            b = t0 + (radius - d0) / (d1 - d0) * (t1 - t0);
        if (!raw.empty() && a <= raw.back().exit_t)
            raw.back().exit_t = std::max(raw.back().exit_t, b);
        else
            raw.push_back({a, b});
    }
    for (const auto &e : raw)
        if (e.exit_t > e.enter_t)
            truth.events.push_back(e);
    if (truth.events.empty())
        truth.empty_segments.push_back({0.0, duration});
    return truth;
}

CsiGenerator::CsiGenerator(Scenario scenario, std::uint64_t seed)
    : scenario_(std::move(scenario)), noise_rng_(seed ^ kNoiseStream)
{
    auto problems = scenario_.scene.violations();
    auto tp = scenario_.trajectory.violations();
    problems.insert(problems.end(), tp.begin(), tp.end());
    if (!(scenario_.duration > 0.0))
        problems.push_back("duration must be positive");
    if (!problems.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto &p : problems)
            msg += " " + p + ";";
        throw ParameterError(msg);
    }

    const Scene &sc = scenario_.scene;
    freqs_ = subcarrier_frequencies(sc.num_subcarriers, sc.center_freq, sc.bandwidth);
    static_response_.assign(sc.num_subcarriers, Complex(0.0, 0.0));
    for (std::size_t n = 0; n < sc.num_subcarriers; ++n)
        for (const auto &p : sc.static_paths)
            static_response_[n] += p.alpha * std::polar(1.0, -kTwoPi * freqs_[n] * p.tau);
    k_ = wave_number(sc.center_freq);

    std::mt19937_64 geo(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t M = sc.num_rays;
    ray_cos_.resize(M);
    ray_phase_.resize(M);
    ray_state_.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        // Stratified arrival angles approximate an isotropic scattering ring.
        const double psi = kTwoPi * (static_cast<double>(i) + unit(geo)) / static_cast<double>(M);
        ray_cos_[i] = std::cos(psi);
        ray_phase_[i] = kTwoPi * unit(geo);
    }
    double amp_sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        jitter_freq_[j] = 0.2 + 1.3 * unit(geo);
        jitter_phase_[j] = kTwoPi * unit(geo);
        jitter_amp_[j] = 0.5 + unit(geo);
        amp_sum += jitter_amp_[j];
    }
    for (double &a : jitter_amp_)
        a /= amp_sum;

    total_ = static_cast<std::size_t>(std::floor(scenario_.duration * sc.sample_rate + 1e-9));
    moving_ = scenario_.trajectory.segment_speed_at(0.0) > 0.0 ? 1.0 : scenario_.trajectory.micro_gain;
}

double CsiGenerator::jitter(double t) const
{
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
        s += jitter_amp_[j] * std::sin(kTwoPi * jitter_freq_[j] * t + jitter_phase_[j]);
    return s;
}

double CsiGenerator::speed_at(double t) const
{
    const auto &tr = scenario_.trajectory;
    const double seg = tr.segment_speed_at(t);
    if (seg > 0.0)
        return seg * (1.0 + tr.gait_depth * std::sin(kTwoPi * tr.gait_rate * t));
    return tr.micro_speed * jitter(t);
}

bool CsiGenerator::next(CsiFrame &frame)
{
    if (index_ >= total_)
        return false;
    const Scene &sc = scenario_.scene;
    const double dt = 1.0 / sc.sample_rate;
    const double t = static_cast<double>(index_) / sc.sample_rate;

    frame.timestamp = t;
    frame.csi.resize(sc.num_subcarriers);
    if (frame.subcarrier_freqs != freqs_)
        frame.subcarrier_freqs = freqs_;

    Complex dynamic(0.0, 0.0);
    Complex rot(1.0, 0.0), rot_step(1.0, 0.0);
    if (sc.dynamic_path) {
        const auto &tr = scenario_.trajectory;
        const double d = tr.distance_at(t);
        const double target = tr.segment_speed_at(t) > 0.0 ? 1.0 : tr.micro_gain;
        moving_ += (target - moving_) * std::min(1.0, dt / kMovingTimeConstant);

        Complex rays(0.0, 0.0);
        for (std::size_t i = 0; i < ray_cos_.size(); ++i)
            rays += std::polar(1.0, ray_phase_[i] + k_ * ray_cos_[i] * path_);
        rays /= std::sqrt(static_cast<double>(ray_cos_.size()));

        const double amp = sc.dynamic_gain_ref / std::pow(d, 0.5 * sc.path_loss_exponent) * moving_;
        dynamic = amp * rays;
        const double tau_d = 2.0 * d / kSpeedOfLight + sc.delay_offset;
        rot = std::polar(1.0, -kTwoPi * (freqs_.front() - sc.center_freq) * tau_d);
        const double spacing = sc.num_subcarriers > 1 ? freqs_[1] - freqs_[0] : 0.0;
        rot_step = std::polar(1.0, -kTwoPi * spacing * tau_d);
        path_ += speed_at(t) * dt;
    }

    const double ns = sc.noise_sigma / std::numbers::sqrt2;
    for (std::size_t n = 0; n < sc.num_subcarriers; ++n) {
        Complex h = static_response_[n] + dynamic * rot;
        if (ns > 0.0) {
            const double re = normal_(noise_rng_);
            const double im = normal_(noise_rng_);
            h += Complex(ns * re, ns * im);
        }
        frame.csi[n] = h;
        rot *= rot_step;
    }
    ++index_;
    return true;
}

GroundTruth CsiGenerator::ground_truth() const
{
    return proxdet::ground_truth(scenario_.trajectory, static_cast<double>(total_) / scenario_.scene.sample_rate,
                                 scenario_.proximate_radius);
}

SyntheticCapture generate_csi(const Scenario &scenario, std::uint64_t seed)
{
    CsiGenerator gen(scenario, seed);
    SyntheticCapture cap;
    cap.frames.reserve(gen.total_frames());
    CsiFrame f;
    while (gen.next(f))
        cap.frames.push_back(f);
    cap.truth = gen.ground_truth();
    return cap;
}

namespace {

Scenario approach_scenario(std::string name, double start, double dwell_distance, double dwell_s)
{
    Scenario s;
    s.name = std::move(name);
    auto &tr = s.trajectory;
    const double lead = 5.0;
    const double walk = (start - dwell_distance) / tr.mean_speed;
    double t = 0.0;
    tr.waypoints.push_back({t, start});
    t += lead;
    tr.waypoints.push_back({t, start});
    t += walk;
    tr.waypoints.push_back({t, dwell_distance});
    t += dwell_s;
    tr.waypoints.push_back({t, dwell_distance});
    t += walk;
    tr.waypoints.push_back({t, start});
    t += lead;
    tr.waypoints.push_back({t, start});
    s.duration = t;
    return s;
}

} // namespace

Scenario preset_scenario(std::string_view name, std::uint64_t seed, double start_distance)
{
    if (name == "approach_dwell_leave")
        return approach_scenario(std::string(name), start_distance > 0.0 ? start_distance : 6.0, 1.0, 30.0);
    if (name == "short_path")
        return approach_scenario(std::string(name), start_distance > 0.0 ? start_distance : 3.0, 1.0, 30.0);
    if (name == "approach_abort") {
        Scenario s;
        s.name = "approach_abort";
        auto &tr = s.trajectory;
        const double start = start_distance > 0.0 ? start_distance : 6.0;
        const double turn = 2.5;
        const double walk = (start - turn) / tr.mean_speed;
        tr.waypoints = {{0.0, start}, {5.0, start}, {5.0 + walk, turn}, {10.0 + walk, turn},
                        {10.0 + 2 * walk, start}, {15.0 + 2 * walk, start}};
        s.duration = 15.0 + 2 * walk;
        return s;
    }
    if (name == "empty_room") {
        // Someone moves around the far part of the room, never within 4 m of the device.
        Scenario s;
        s.name = "empty_room";
        s.duration = 300.0;
        auto &tr = s.trajectory;
        std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
        std::uniform_real_distribution<double> where(4.0, 9.0), pause(5.0, 20.0);
        double t = 0.0, d = where(rng);
        tr.waypoints.push_back({t, d});
        while (t < s.duration) {
            t += pause(rng);
            tr.waypoints.push_back({t, d});
            double next = where(rng);
            if (std::abs(next - d) < 0.5)
                next = d > 6.5 ? d - 2.0 : d + 2.0;
            t += std::abs(next - d) / tr.mean_speed;
            d = next;
            tr.waypoints.push_back({t, d});
        }
        return s;
    }
    throw ParameterError("unknown scenario preset '" + std::string(name) + "'");
}

namespace {

template <class T>
void read_opt(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

Scenario scenario_from_json(const std::string &text, std::uint64_t seed)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ParameterError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParameterError("scenario document must be a JSON object");
    try {
        Scenario s;
        if (j.contains("preset")) {
            double start = -1.0;
            read_opt(j, "start_distance", start);
            s = preset_scenario(j.at("preset").get<std::string>(), seed, start);
        }
        read_opt(j, "name", s.name);
        read_opt(j, "duration", s.duration);
        read_opt(j, "proximate_radius", s.proximate_radius);
        if (j.contains("scene")) {
            const auto &js = j.at("scene");
            auto &sc = s.scene;
            read_opt(js, "num_subcarriers", sc.num_subcarriers);
            read_opt(js, "center_freq", sc.center_freq);
            read_opt(js, "bandwidth", sc.bandwidth);
            read_opt(js, "sample_rate", sc.sample_rate);
            read_opt(js, "noise_sigma", sc.noise_sigma);
            read_opt(js, "dynamic_gain_ref", sc.dynamic_gain_ref);
            read_opt(js, "path_loss_exponent", sc.path_loss_exponent);
            read_opt(js, "num_rays", sc.num_rays);
            read_opt(js, "delay_offset", sc.delay_offset);
            read_opt(js, "dynamic_path", sc.dynamic_path);
            if (js.contains("static_paths")) {
                sc.static_paths.clear();
                for (const auto &p : js.at("static_paths"))
                    sc.static_paths.push_back({Complex(p.at("re").get<double>(), p.at("im").get<double>()),
                                               p.at("tau").get<double>()});
            }
        }
        if (j.contains("trajectory")) {
            const auto &jt = j.at("trajectory");
            auto &tr = s.trajectory;
            read_opt(jt, "mean_speed", tr.mean_speed);
            read_opt(jt, "gait_rate", tr.gait_rate);
            read_opt(jt, "gait_depth", tr.gait_depth);
            read_opt(jt, "micro_speed", tr.micro_speed);
            read_opt(jt, "micro_gain", tr.micro_gain);
            if (jt.contains("waypoints")) {
                tr.waypoints.clear();
                for (const auto &w : jt.at("waypoints"))
                    tr.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
            }
        }
        auto problems = s.scene.violations();
        auto tp = s.trajectory.violations();
        problems.insert(problems.end(), tp.begin(), tp.end());
        if (!(s.duration > 0.0))
            problems.push_back("duration must be positive");
        if (!(s.proximate_radius > 0.0))
            problems.push_back("proximate_radius must be positive");
        if (!problems.empty()) {
            std::string msg = "invalid scenario:";
            for (const auto &p : problems)
                msg += " " + p + ";";
            throw ParameterError(msg);
        }
        return s;
    } catch (const json::exception &e) {
        throw ParameterError(std::string("scenario field has the wrong type: ") + e.what());
    }
}

std::string scenario_to_json(const Scenario &s)
{
    json paths = json::array();
    for (const auto &p : s.scene.static_paths)
        paths.push_back({{"re", p.alpha.real()}, {"im", p.alpha.imag()}, {"tau", p.tau}});
    json wps = json::array();
    for (const auto &w : s.trajectory.waypoints)
        wps.push_back({w.t, w.distance});
    json j = {
        {"name", s.name},
        {"duration", s.duration},
        {"proximate_radius", s.proximate_radius},
        {"scene",
         {{"num_subcarriers", s.scene.num_subcarriers},
          {"center_freq", s.scene.center_freq},
          {"bandwidth", s.scene.bandwidth},
          {"sample_rate", s.scene.sample_rate},
          {"noise_sigma", s.scene.noise_sigma},
          {"dynamic_gain_ref", s.scene.dynamic_gain_ref},
          {"path_loss_exponent", s.scene.path_loss_exponent},
          {"num_rays", s.scene.num_rays},
          {"delay_offset", s.scene.delay_offset},
          {"dynamic_path", s.scene.dynamic_path},
          {"static_paths", paths}}},
        {"trajectory",
         {{"waypoints", wps},
          {"mean_speed", s.trajectory.mean_speed},
          {"gait_rate", s.trajectory.gait_rate},
          {"gait_depth", s.trajectory.gait_depth},
          {"micro_speed", s.trajectory.micro_speed},
          {"micro_gain", s.trajectory.micro_gain}}},
    };
    return j.dump(2);
}

std::string ground_truth_jsonl(const GroundTruth &truth)
{
    std::string out;
    for (const auto &e : truth.events)
        out += json{{"type", "event"}, {"enter_t", e.enter_t}, {"exit_t", e.exit_t}}.dump() + "\n";
    for (const auto &e : truth.empty_segments)
        out += json{{"type", "empty"}, {"start_t", e.start_t}, {"end_t", e.end_t}}.dump() + "\n";
    return out;
}

GroundTruth parse_ground_truth_jsonl(std::istream &in)
{
    GroundTruth truth;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            json j = json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "event") {
                GroundTruthEvent e{j.at("enter_t").get<double>(), j.at("exit_t").get<double>()};
                if (!(e.enter_t < e.exit_t))
                    throw DataError("line " + std::to_string(no) + ": enter_t must precede exit_t");
                truth.events.push_back(e);
            } else if (type == "empty") {
                truth.empty_segments.push_back({j.at("start_t").get<double>(), j.at("end_t").get<double>()});
            } else {
                throw DataError("line " + std::to_string(no) + ": unknown ground-truth record type '" + type + "'");
            }
        } catch (const json::exception &e) {
            throw DataError("line " + std::to_string(no) + ": not a ground-truth record (" + e.what() + ")");
        }
    }
    return truth;
}

} // namespace proxdet
