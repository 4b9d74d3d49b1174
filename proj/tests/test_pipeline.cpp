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
#include "proxdet/csi_io.hpp"
#include "proxdet/diagnostics.hpp"
#include "proxdet/pipeline.hpp"
#include "proxdet/synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace proxdet;

namespace {

struct Collected {
    std::vector<FeatureSample> features;
    std::vector<AcfResult> acfs;
    std::vector<DetectionEvent> events;
    std::vector<std::pair<double, State>> states;

    PipelineSinks sinks()
    {
        PipelineSinks s;
        s.on_feature = [this](const FeatureSample &f) { features.push_back(f); };
        s.on_acf = [this](const AcfResult &a, const SpeedEstimate &) { acfs.push_back(a); };
        s.on_event = [this](const DetectionEvent &e) { events.push_back(e); };
        s.on_state = [this](double t, State st) { states.emplace_back(t, st); };
        return s;
    }
};

Collected run(const SyntheticCapture &cap, const PipelineConfig &cfg = {})
{
    Collected c;
    ProximityDetector det(cfg, cap.frames.front().csi.size(), c.sinks());
    for (const auto &f : cap.frames)
        det.push(f);
    det.finish();
    return c;
}

struct QuietWarnings {
    WarningSink previous;
    std::size_t count = 0;
    QuietWarnings()
    {
        previous = set_warning_sink([this](std::string_view) { ++count; });
    }
    ~QuietWarnings() { set_warning_sink(previous); }
};

} // namespace

TEST_CASE("a motionless scene never shows gait and never fires")
{
    Scenario s = preset_scenario("approach_dwell_leave");
    s.scene.dynamic_path = false;
    s.duration = 20.0;
    auto c = run(generate_csi(s, 3));
    REQUIRE(c.features.size() > 150);
    for (const auto &f : c.features)
        CHECK(f.fg == 0.0);
    CHECK(c.events.empty());
}

TEST_CASE("streaming proximity feature equals the batch computation")
{
    Scenario s = preset_scenario("approach_dwell_leave", 8);
    s.duration = 12.0;
    auto cap = generate_csi(s, 8);
    PipelineConfig cfg;
    auto c = run(cap, cfg);

    PowerSeries full;
    full.sample_rate = cfg.sample_rate;
    full.num_subcarriers = 56;
    for (const auto &f : cap.frames)
        full.frames.push_back(normalize_frame(power_response(f)));
    auto slow = hampel_filter(downsample(full, cfg.downsample_factor()), cfg.hampel.window, cfg.hampel.n_sigmas);
    const auto len = static_cast<std::size_t>(std::llround(cfg.fp_window_s * cfg.downsample_to));

    REQUIRE(c.features.size() > 100);
    for (const auto &f : c.features) {
        std::size_t upto = 0;
        while (upto < slow.size() && slow.frames[upto].timestamp <= f.t)
            ++upto;
        REQUIRE(upto >= 10);
        PowerSeries w;
        w.sample_rate = slow.sample_rate;
        w.num_subcarriers = 56;
        const std::size_t from = upto > len ? upto - len : 0;
        w.frames.assign(slow.frames.begin() + static_cast<std::ptrdiff_t>(from),
                        slow.frames.begin() + static_cast<std::ptrdiff_t>(upto));
        CHECK(std::abs(f.fp - proximity_feature(w)) <= 1e-9);
    }
}

TEST_CASE("streaming ACF equals the batch ACF of the same window")
{
    Scenario s = preset_scenario("approach_dwell_leave", 2);
    s.duration = 9.0;
    auto cap = generate_csi(s, 2);
    PipelineConfig cfg;
    auto c = run(cap, cfg);
    const auto n = static_cast<std::size_t>(std::llround(cfg.acf.window_s * cfg.sample_rate));
    const auto hop = static_cast<std::size_t>(std::llround(cfg.acf.hop_s * cfg.sample_rate));
    REQUIRE(c.acfs.size() == (cap.frames.size() - n) / hop + 1);
    for (std::size_t w : {std::size_t{0}, std::size_t{30}, c.acfs.size() - 1}) {
        PowerSeries win;
        win.sample_rate = cfg.sample_rate;
        win.num_subcarriers = 56;
        for (std::size_t i = w * hop; i < w * hop + n; ++i)
            win.frames.push_back(normalize_frame(power_response(cap.frames[i])));
        auto ref = combine_acf(acf_per_subcarrier(win, cfg.acf.max_lag_s), win.frames.back().timestamp);
        CHECK(c.acfs[w].window_end == ref.window_end);
        REQUIRE(c.acfs[w].acf.size() == ref.acf.size());
        for (std::size_t l = 0; l < ref.acf.size(); ++l)
            CHECK(std::abs(c.acfs[w].acf[l] - ref.acf[l]) <= 1e-9);
    }
}

TEST_CASE("one approach-dwell-leave visit gives NearEntered then NearExited")
{
    Scenario s = preset_scenario("approach_dwell_leave", 1);
    auto cap = generate_csi(s, 1);
    auto c = run(cap);
    REQUIRE(c.events.size() == 2);
    CHECK(c.events[0].kind == EventKind::NearEntered);
    CHECK(c.events[1].kind == EventKind::NearExited);
    CHECK(std::abs(c.events[0].t - cap.truth.events[0].enter_t) < 2.0);
    CHECK(c.events[1].t > cap.truth.events[0].exit_t - 2.0);
    CHECK(c.states.size() == c.features.size());
}

TEST_CASE("detection is deterministic")
{
    Scenario s = preset_scenario("approach_dwell_leave", 4);
    auto cap = generate_csi(s, 4);
    auto a = run(cap), b = run(cap);
    CHECK(a.events == b.events);
    REQUIRE(a.features.size() == b.features.size());
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        CHECK(a.features[i].fp == b.features[i].fp);
        CHECK(a.features[i].fg == b.features[i].fg);
    }
}

TEST_CASE("out-of-order frames are a stream error")
{
    ProximityDetector det(PipelineConfig{}, 4);
    det.push(PowerFrame{1.0, {1, 2, 3, 4}});
    CHECK_THROWS_AS(det.push(PowerFrame{0.5, {1, 2, 3, 4}}), StreamError);
    CHECK_THROWS_AS(det.push(PowerFrame{2.0, {1, 2, 3}}), DataError);
}

TEST_CASE("degenerate frames are dropped and counted, jitter is counted")
{
    QuietWarnings quiet;
    ProximityDetector det(PipelineConfig{}, 2);
    det.push(PowerFrame{0.0, {1.0, 2.0}});
    det.push(PowerFrame{1.0 / 1500, {0.0, 0.0}});
    det.push(PowerFrame{2.0 / 1500, {1.0, 2.0}});
    det.push(PowerFrame{5.0 / 1500, {1.0, 2.0}});
    det.finish();
    CHECK(det.dropped_frames() == 1);
    CHECK(det.jitter_violations() == 1);
    CHECK(quiet.count >= 2);
}

TEST_CASE("run_capture reads a capture stream and honours its header")
{
    QuietWarnings quiet;
    Scenario s = preset_scenario("approach_dwell_leave", 5);
    s.duration = 3.0;
    auto cap = generate_csi(s, 5);
    std::stringstream io;
    {
        CaptureWriter w(io, CaptureHeader{CaptureKind::Csi, 56, 1500.0, 5.18e9, 40e6});
        for (const auto &f : cap.frames)
            w.write(f);
    }
    CaptureReader reader(io);
    PipelineConfig cfg;
    auto r = run_capture(reader, cfg);
    CHECK(r.frames == cap.frames.size());
    CHECK(r.stream_end == cap.frames.back().timestamp);
    CHECK(r.features.size() == run(cap).features.size());
    CHECK(quiet.count == 0);

    std::stringstream io2;
    {
        CaptureWriter w(io2, CaptureHeader{CaptureKind::Csi, 56, 1500.0, 2.4e9, 20e6});
        for (const auto &f : cap.frames)
            w.write(f);
    }
    CaptureReader reader2(io2);
    run_capture(reader2, cfg);
    CHECK(quiet.count == 1);
}

TEST_CASE("event jsonl round trip and schema mismatch")
{
    std::vector<DetectionEvent> ev{{EventKind::NearEntered, 8.25, State::Approaching, State::Near},
                                   {EventKind::NearExited, 40.5, State::Leaving, State::Faraway}};
    std::string text;
    for (const auto &e : ev)
        text += event_json(e) + "\n";
    std::istringstream in(text);
    CHECK(parse_events_jsonl(in) == ev);

    std::istringstream gt("{\"type\":\"event\",\"enter_t\":1,\"exit_t\":2}\n");
    CHECK_THROWS_AS(parse_events_jsonl(gt), DataError);
}

namespace {

// Back and forth between two distances at the trajectory's nominal speed.
Scenario pacing(double near, double far, double speed, double duration)
{
    Scenario s;
    s.duration = duration;
    s.trajectory.mean_speed = speed;
    double t = 0.0, d = far;
    s.trajectory.waypoints.push_back({t, d});
    while (t < duration) {
        t += (far - near) / speed;
        d = d == far ? near : far;
        s.trajectory.waypoints.push_back({t, d});
    }
    return s;
}

double mean_after(const std::vector<FeatureSample> &f, double t0, double FeatureSample::*field)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &x : f)
        if (x.t > t0) {
            sum += x.*field;
            ++n;
        }
    return sum / static_cast<double>(n);
}

} // namespace

TEST_CASE("gait cycle rate follows a walk modulated at 0.9 cycles per second")
{
    auto s = pacing(1.5, 4.5, 1.3, 30.0);
    s.trajectory.gait_rate = 0.9;
    for (std::uint64_t seed : {1u, 2u}) {
        auto c = run(generate_csi(s, seed));
        CHECK(std::abs(mean_after(c.features, 5.0, &FeatureSample::c) - 0.9) <= 0.2);
    }
}

TEST_CASE("a walker scores higher gait than an irregularly oscillating arm")
{
    auto walk = pacing(1.5, 4.5, 1.2, 20.0);
    walk.trajectory.gait_rate = 1.0;

    Scenario arm = walk;
    arm.trajectory.waypoints.clear();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> stroke(0.05, 0.25);
    double t = 0.0, d = 2.0;
    arm.trajectory.waypoints.push_back({t, d});
    while (t < arm.duration) {
        const double len = stroke(rng);
        t += len / 0.3;
        d = d >= 2.0 ? 2.0 - len / 2 : 2.0 + len / 2;
        arm.trajectory.waypoints.push_back({t, d});
    }

    const double fg_walk = mean_after(run(generate_csi(walk, 1)).features, 3.0, &FeatureSample::fg);
    const double fg_arm = mean_after(run(generate_csi(arm, 1)).features, 3.0, &FeatureSample::fg);
    CHECK(fg_walk > 0.0);
    CHECK(fg_walk > 10.0 * fg_arm);
}

TEST_CASE("a steady 1.2 m/s walker is recovered by the speed estimator")
{
    auto s = pacing(1.5, 4.5, 1.2, 20.0);
    s.trajectory.gait_depth = 0.0;
    for (std::uint64_t seed : {1u, 2u}) {
        auto cap = generate_csi(s, seed);
        std::vector<double> speeds;
        PipelineSinks sinks;
        sinks.on_acf = [&](const AcfResult &, const SpeedEstimate &e) {
            if (e.found)
                speeds.push_back(e.v_hat);
        };
        ProximityDetector det(PipelineConfig{}, 56, sinks);
        for (const auto &f : cap.frames)
            det.push(f);
        det.finish();
        REQUIRE(speeds.size() > 100);
        const auto mid = speeds.begin() + static_cast<std::ptrdiff_t>(speeds.size() / 2);
        std::nth_element(speeds.begin(), mid, speeds.end());
        CHECK(std::abs(*mid - 1.2) / 1.2 < 0.05);
    }
}

TEST_CASE("default scene reproduces the recorded proximity calibration")
{
    std::ifstream in(std::string(PROXDET_FIXTURES) + "/fp_calibration.json");
    REQUIRE(in);
    const auto fx = nlohmann::json::parse(in);
    for (const char *d : {"1", "5"}) {
        const double dist = std::stod(d);
        Scenario s;
        s.duration = 30.0;
        double t = 0.0, x = dist + 0.25;
        s.trajectory.waypoints.push_back({t, x});
        while (t < s.duration + 1.0) {
            t += 0.5 / s.trajectory.mean_speed;
            x = x > dist ? dist - 0.25 : dist + 0.25;
            s.trajectory.waypoints.push_back({t, x});
        }
        const double fp = mean_after(run(generate_csi(s, 1)).features, 0.0, &FeatureSample::fp);
        CHECK(fp == doctest::Approx(fx["mean_fp"][d][0].get<double>()).epsilon(1e-3));
        CHECK(std::abs(fp - fx["targets"][d].get<double>()) < 0.05);
    }
}
