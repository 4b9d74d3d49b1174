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
#include "proxdet/diagnostics.hpp"
#include "proxdet/eval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace proxdet;

namespace {

// GT dwell events of 30 s every 100 s.
GroundTruth spaced_truth(std::size_t n)
{
    GroundTruth g;
    for (std::size_t i = 0; i < n; ++i)
        g.events.push_back({100.0 * i + 10.0, 100.0 * i + 40.0});
    return g;
}

std::vector<DetectionInterval> as_detections(const GroundTruth &g)
{
    std::vector<DetectionInterval> d;
    for (const auto &e : g.events)
        d.push_back({e.enter_t, e.exit_t});
    return d;
}

double round_to(double x, int digits)
{
    const double s = std::pow(10.0, digits);
    return std::round(x * s) / s;
}

} // namespace

TEST_CASE("events pair into detection intervals")
{
    std::vector<DetectionEvent> ev{{EventKind::NearEntered, 1.0, State::Approaching, State::Near},
                                   {EventKind::NearExited, 5.0, State::Leaving, State::Faraway},
                                   {EventKind::NearEntered, 9.0, State::Approaching, State::Near}};
    auto d = detection_intervals(ev);
    REQUIRE(d.size() == 2);
    CHECK(d[0].exit_t == 5.0);
    CHECK_FALSE(d[1].exit_t.has_value());
    CHECK(std::isinf(d[1].end()));

    std::vector<DetectionEvent> bad{{EventKind::NearExited, 1.0, State::Leaving, State::Faraway}};
    CHECK_THROWS_AS(detection_intervals(bad), DataError);
}

TEST_CASE("oracle detections give perfect scores")
{
    auto g = spaced_truth(10);
    g.empty_segments = {{1000.0, 1300.0}, {1300.0, 1600.0}};
    auto r = evaluate(as_detections(g), g);
    CHECK(r.ia == 1.0);
    CHECK(r.da == 1.0);
    CHECK(r.fa == 0.0);
    CHECK(r.tau_mean == 0.0);
    CHECK(r.n_matched == 10);
}

TEST_CASE("no detections give zero instance accuracy")
{
    auto r = evaluate({}, spaced_truth(4));
    CHECK(r.ia == 0.0);
    CHECK_FALSE(r.da.has_value());
    CHECK_FALSE(r.fa.has_value());
}

TEST_CASE("234 of 253 detected is 92.5 percent")
{
    auto g = spaced_truth(253);
    auto d = as_detections(g);
    std::mt19937_64 rng(1);
    std::shuffle(d.begin(), d.end(), rng);
    d.resize(234);
    auto r = evaluate(d, g);
    CHECK(r.ia == 234.0 / 253.0);
    CHECK(round_to(*r.ia, 3) == 0.925);
}

TEST_CASE("3 false detections over 269 empty segments is 1.12 percent")
{
    GroundTruth g;
    for (int i = 0; i < 269; ++i)
        g.empty_segments.push_back({60.0 * i, 60.0 * i + 60.0});
    std::vector<DetectionInterval> d{{100.0, 110.0}, {5000.0, 5003.0}, {9000.0, std::nullopt}};
    auto r = evaluate(d, g);
    CHECK(r.n_false == 3);
    CHECK(r.fa == 3.0 / 269.0);
    CHECK(round_to(*r.fa, 4) == 0.0112);
}

TEST_CASE("one spurious detection over ten empty segments")
{
    GroundTruth g;
    for (int i = 0; i < 10; ++i)
        g.empty_segments.push_back({60.0 * i, 60.0 * i + 60.0});
    auto r = evaluate({{30.0, 31.0}}, g);
    CHECK(r.fa == 0.1);
}

TEST_CASE("twenty events with two misses")
{
    auto g = spaced_truth(20);
    auto d = as_detections(g);
    d.erase(d.begin() + 7);
    d.erase(d.begin() + 12);
    auto r = evaluate(d, g);
    CHECK(r.ia == 0.9);
}

TEST_CASE("duration accuracy clips over-covering detections at one")
{
    GroundTruthEvent g{10.0, 70.0};
    CHECK(duration_accuracy({10.0, 70.0}, g) == 1.0);
    CHECK(duration_accuracy({5.0, 80.0}, g) == 1.0);
    CHECK(duration_accuracy({0.0, 1000.0}, g) == 1.0);
    // 59.3 s of a 60 s dwell
    CHECK(*duration_accuracy({10.7, 70.0}, g) == doctest::Approx(59.3 / 60.0).epsilon(1e-12));
    CHECK_FALSE(duration_accuracy({10.0, std::nullopt}, g).has_value());
    CHECK_FALSE(duration_accuracy({10.0, 20.0}, GroundTruthEvent{5.0, 5.0}).has_value());
}

TEST_CASE("extending a detection beyond the truth never changes duration accuracy")
{
    GroundTruthEvent g{10.0, 40.0};
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        DetectionInterval d{15.0, 35.0};
        const double base = *duration_accuracy(d, g);
        d.exit_t = 40.0 + u(rng);
        const double covering_tail = *duration_accuracy(d, g);
        DetectionInterval d2{15.0, 40.0};
        CHECK(covering_tail == *duration_accuracy(d2, g));
        CHECK(base <= covering_tail);
    }
}

TEST_CASE("responsiveness sign: positive is late")
{
    GroundTruthEvent g{10.0, 40.0};
    CHECK(responsiveness({10.0, 40.0}, g) == 0.0);
    CHECK(responsiveness({10.825, 40.0}, g) == doctest::Approx(0.825));
    CHECK(responsiveness({9.8, 40.0}, g) == doctest::Approx(-0.2));
}

TEST_CASE("jittered detections still match by overlap")
{
    auto g = spaced_truth(10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> j(-1.0, 1.0);
    std::vector<DetectionInterval> d;
    for (const auto &e : g.events)
        d.push_back({e.enter_t + j(rng), e.exit_t + j(rng)});
    auto r = evaluate(d, g);
    CHECK(r.n_matched == 10);
    CHECK(r.tau_mean <= 1.0);
}

TEST_CASE("overlapping detections violate the input contract")
{
    auto g = spaced_truth(2);
    std::vector<DetectionInterval> d{{0.0, 50.0}, {20.0, 60.0}};
    CHECK_THROWS_AS(evaluate(d, g), DataError);
}

TEST_CASE("metrics do not depend on input order")
{
    auto g = spaced_truth(15);
    g.empty_segments = {{2000.0, 2100.0}};
    auto d = as_detections(g);
    d.erase(d.begin() + 3);
    d.push_back({2050.0, 2060.0});
    for (auto &x : d)
        x.enter_t += 0.5;
    auto ref = evaluate(d, g);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        auto d2 = d;
        auto g2 = g;
        std::shuffle(d2.begin(), d2.end(), rng);
        std::shuffle(g2.events.begin(), g2.events.end(), rng);
        auto r = evaluate(d2, g2);
        CHECK(r.ia == ref.ia);
        CHECK(r.da == ref.da);
        CHECK(r.fa == ref.fa);
        CHECK(r.tau_mean == ref.tau_mean);
    }
}

TEST_CASE("metrics stay within the unit interval")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1000.0), len(0.5, 60.0);
    for (int trial = 0; trial < 200; ++trial) {
        GroundTruth g;
        double t = 0.0;
        for (int i = 0; i < 8; ++i) {
            t += len(rng);
            const double a = t;
            t += len(rng);
            g.events.push_back({a, t});
        }
        g.empty_segments = {{t + 1, t + 100}, {t + 100, t + 200}};
        std::vector<DetectionInterval> d;
        double s = 0.0;
        for (int i = 0; i < 10; ++i) {
            s += len(rng);
            const double a = s;
            s += len(rng);
            d.push_back({a, s});
        }
        auto r = evaluate(d, g);
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

TEST_CASE("merging reports pools the counts")
{
    auto g = spaced_truth(4);
    auto d = as_detections(g);
    d.pop_back();
    GroundTruth empty;
    empty.empty_segments = {{0.0, 300.0}};
    std::vector<EvalReport> parts{evaluate(d, g), evaluate({}, empty)};
    auto m = merge(parts);
    CHECK(m.n_gt == 4);
    CHECK(m.ia == 0.75);
    CHECK(m.fa == 0.0);
    CHECK(m.da == 1.0);
}

TEST_CASE("report json carries every field")
{
    auto g = spaced_truth(2);
    auto r = evaluate(as_detections(g), g);
    auto j = report_json(r);
    for (const char *key : {"\"ia\"", "\"da\"", "\"fa\"", "\"tau_mean\"", "\"tau_per_event\"", "\"matched_pairs\""})
        CHECK(j.find(key) != std::string::npos);
}
