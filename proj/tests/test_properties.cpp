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
#include "oracles.hpp"

#include "proxdet/csi.hpp"
#include "proxdet/eval.hpp"
#include "proxdet/features.hpp"
#include "proxdet/fsm.hpp"
#include "proxdet/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace proxdet;

namespace {

PowerSeries column(const std::vector<double> &x, double rate = 30.0)
{
    PowerSeries s;
    s.sample_rate = rate;
    s.num_subcarriers = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
        s.frames.push_back(PowerFrame{static_cast<double>(i) / rate, {x[i]}});
    return s;
}

PowerSeries random_series(std::mt19937_64 &rng, std::size_t frames, std::size_t width, double rate)
{
    std::uniform_real_distribution<double> u(0.1, 2.0);
    PowerSeries s;
    s.sample_rate = rate;
    s.num_subcarriers = width;
    for (std::size_t i = 0; i < frames; ++i) {
        PowerFrame f{static_cast<double>(i) / rate, std::vector<double>(width)};
        for (auto &g : f.g)
            g = u(rng);
        s.frames.push_back(std::move(f));
    }
    return s;
}

} // namespace

TEST_CASE("hampel filter agrees with a brute-force filter on random series")
{
    std::mt19937_64 rng(101);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<int> half(1, 10);
    std::bernoulli_distribution spike(0.05), quantize(0.3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t window = 2 * static_cast<std::size_t>(half(rng)) + 1;
        const std::size_t n = std::uniform_int_distribution<std::size_t>(window, 120)(rng);
        const double k = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
        const bool ties = quantize(rng);
        std::vector<double> x(n);
        for (auto &v : x) {
            v = noise(rng) + (spike(rng) ? 25.0 * noise(rng) : 0.0);
            if (ties)
                v = std::round(v);
        }
        auto out = hampel_filter(column(x), window, k);
        auto ref = oracle::hampel(x, window, k);
        REQUIRE(out.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(out.frames[i].g[0] == ref[i]);
    }
}

TEST_CASE("frame normalization is idempotent and gain invariant")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gain(1e-3, 1e3);
    auto s = random_series(rng, 200, 56, 1500.0);
    for (const auto &f : s.frames) {
        auto once = normalize_frame(f);
        auto twice = normalize_frame(once);
        PowerFrame scaled = f;
        const double a = gain(rng);
        for (auto &g : scaled.g)
            g *= a;
        auto from_scaled = normalize_frame(scaled);
        double mean = 0.0;
        for (std::size_t k = 0; k < f.g.size(); ++k) {
            CHECK(std::abs(twice.g[k] - once.g[k]) <= 1e-12);
            CHECK(std::abs(from_scaled.g[k] - once.g[k]) <= 1e-12);
            mean += once.g[k];
        }
        CHECK(std::abs(mean / 56.0 - 1.0) <= 1e-12);
    }
}

TEST_CASE("downsampling composes over factors")
{
    std::mt19937_64 rng(11);
    auto s = random_series(rng, 1500, 8, 1500.0);
    auto direct = downsample(s, 50);
    auto nested = downsample(downsample(s, 5), 10);
    REQUIRE(direct.size() == 30);
    REQUIRE(nested.size() == 30);
    CHECK(direct.sample_rate == doctest::Approx(30.0));
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(std::abs(direct.frames[i].timestamp - nested.frames[i].timestamp) <= 1e-12);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(std::abs(direct.frames[i].g[k] - nested.frames[i].g[k]) <= 1e-12);
    }
}

TEST_CASE("walking probability is symmetric, bounded and decreasing away from the mean")
{
    GaitParams p;
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double d = i * 0.005;
        const double up = walking_speed_probability(p.mean_speed + d, p);
        const double down = walking_speed_probability(p.mean_speed - d, p);
        CHECK(std::abs(up - down) <= 1e-15);
        CHECK(up >= 0.0);
        CHECK(up <= 1.0);
        CHECK(up <= prev);
        prev = up;
    }
}

TEST_CASE("proximity feature is invariant to per-subcarrier positive affine maps")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_series(rng, 45, 16, 30.0);
        auto t = s;
        for (std::size_t k = 0; k < 16; ++k) {
            const double a = scale(rng), b = shift(rng);
            for (auto &f : t.frames)
                f.g[k] = a * f.g[k] + b;
        }
        const double fp = proximity_feature(s);
        CHECK(fp >= -1.0);
        CHECK(fp <= 1.0);
        CHECK(std::abs(fp - proximity_feature(t)) <= 1e-12);
    }
}

TEST_CASE("ACF starts at one, stays in range and matches a direct sum")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_series(rng, 450, 4, 1500.0);
        auto acf = acf_per_subcarrier(s, 0.15);
        REQUIRE(acf.num_lags == 226);
        for (std::size_t k = 0; k < 4; ++k) {
            auto ref = oracle::autocorrelation(s.subcarrier(k), acf.num_lags - 1);
            CHECK(acf.at(0, k) == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t l = 0; l < acf.num_lags; ++l) {
                const double v = acf.at(l, k);
                CHECK(v >= -1.0);
                CHECK(v <= 1.0);
                CHECK(std::abs(v - ref[l]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("slope of an exact line is recovered")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double m = u(rng), b = u(rng);
        std::vector<TimedValue> h;
        for (int i = 0; i < 20; ++i)
            h.push_back({10.0 + i / 30.0, m * (10.0 + i / 30.0) + b});
        auto r = slope(h, 0.5);
        REQUIRE(r.ready);
        CHECK(std::abs(r.value - m) <= 1e-8);
    }
}

TEST_CASE("FSM events alternate, are ordered and respect debounce on random input")
{
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0), fs(-0.3, 0.3);
    std::bernoulli_distribution walking(0.4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FeatureSample> in;
        double fp = 0.3;
        for (int i = 0; i < 600; ++i) {
            fp = std::clamp(fp + 0.1 * (u(rng) - 0.5), 0.0, 1.0);
            in.push_back({i / 10.0, fp, fs(rng), 0.0, 0.0, walking(rng) ? 0.2 : 0.0});
        }
        auto ev = run_detector(in, FsmConfig{});
        for (std::size_t i = 0; i < ev.size(); ++i) {
            CHECK(ev[i].kind == (i % 2 == 0 ? EventKind::NearEntered : EventKind::NearExited));
            if (i > 0)
                CHECK(ev[i].t >= ev[i - 1].t);
            CHECK(ev[i].t >= in[FsmConfig{}.debounce - 1].t - 1.0);
        }
    }
}

TEST_CASE("without gait the FSM never leaves Near")
{
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0), fs(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FeatureSample> in;
        for (int i = 0; i < 30; ++i)
            in.push_back({i / 10.0, 0.3 + i * 0.025, 0.25, 1.3, 1.0, 0.5});
        for (int i = 30; i < 600; ++i)
            in.push_back({i / 10.0, u(rng), fs(rng), 0.0, 0.0, 0.0});
        auto ev = run_detector(in, FsmConfig{});
        REQUIRE(!ev.empty());
        CHECK(ev[0].kind == EventKind::NearEntered);
        for (const auto &e : ev)
            CHECK(e.kind != EventKind::NearExited);
    }
}

TEST_CASE("metrics stay in range and a perfect detector scores perfectly")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        GroundTruth gt;
        std::vector<DetectionInterval> perfect, noisy;
        double t = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double a = t + 1.0 + 10.0 * u(rng), b = a + 1.0 + 20.0 * u(rng);
            gt.events.push_back({a, b});
            perfect.push_back({a, b});
            if (u(rng) < 0.8)
                noisy.push_back({a + 4.0 * (u(rng) - 0.5), b + 4.0 * (u(rng) - 0.5)});
            t = b + 5.0;
        }
        gt.empty_segments.push_back({t, t + 60.0});
        if (u(rng) < 0.3)
            noisy.push_back({t + 10.0, t + 20.0});

        auto ideal = evaluate(perfect, gt);
        CHECK(*ideal.ia == 1.0);
        CHECK(*ideal.da == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ideal.tau_mean == doctest::Approx(0.0));
        CHECK(*ideal.fa == 0.0);

        auto r = evaluate(noisy, gt);
        CHECK(*r.ia >= 0.0);
        CHECK(*r.ia <= 1.0);
        if (r.da) {
            CHECK(*r.da >= 0.0);
            CHECK(*r.da <= 1.0);
        }
        CHECK(*r.fa >= 0.0);
        CHECK(*r.fa <= 1.0);
    }
}
