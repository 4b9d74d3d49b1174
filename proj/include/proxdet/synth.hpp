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
#ifndef PROXDET_SYNTH_HPP
#define PROXDET_SYNTH_HPP

#include "proxdet/csi.hpp"
#include "proxdet/eval.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace proxdet {

struct StaticPath {
    Complex alpha;
    double tau = 0.0;  // s
};

// Radio environment: static multipath plus one moving human scatterer.
struct Scene {
    std::size_t num_subcarriers = 56;
    double center_freq = 5.18e9;
    double bandwidth = 40e6;
    double sample_rate = 1500.0;
    std::vector<StaticPath> static_paths = default_static_paths();
    double noise_sigma = 0.03;        // complex std per subcarrier and sample
    double dynamic_gain_ref = 0.15;   // |alpha_d| at 1 m
    double path_loss_exponent = 4.0;  // power decay; |alpha_d| ~ d^(-ple/2)
    std::size_t num_rays = 32;        // scattering rays of the body cluster
    double delay_offset = 10e-9;      // fixed geometric excess delay of the dynamic path
    bool dynamic_path = true;

    static std::vector<StaticPath> default_static_paths();
    std::vector<std::string> violations() const;
};

struct Waypoint {
    double t = 0.0;         // s
    double distance = 0.0;  // m
};

// Piecewise-linear target distance over time. Moving segments are walked with gait
// modulated speed; stationary segments carry micro-motion of a fraction of the body.
struct Trajectory {
    std::vector<Waypoint> waypoints;
    double mean_speed = 1.3;   // m/s, nominal speed used to lay out presets
    double gait_rate = 1.0;    // cycles/s
    double gait_depth = 0.2;   // fraction of segment speed
    double micro_speed = 0.1;  // bound of the micro-motion speed, m/s
    double micro_gain = 0.3;   // moving fraction of the scatterer while stationary

    double distance_at(double t) const;
    // Magnitude of the nominal (unmodulated) radial speed at t; 0 on stationary segments.
    double segment_speed_at(double t) const;
    std::vector<std::string> violations() const;
};

struct Scenario {
    std::string name = "custom";
    Scene scene;
    Trajectory trajectory;
    double duration = 60.0;          // s
    double proximate_radius = 1.5;  // m
};

// Ground truth of a trajectory: intervals with distance <= radius, exact on the
// piecewise-linear path. A capture with no such interval counts as one empty segment.
GroundTruth ground_truth(const Trajectory &traj, double duration, double radius = 1.5);

// Streaming CSI synthesizer for the multipath model
//   H(t, f_n) = sum_l alpha_l e^{-j 2 pi f_n tau_l} + alpha_d(t) e^{-j 2 pi (f_n - f_c) tau_d(t)} R(t) + noise,
// where R(t) is a unit-power sum of rays with uniformly spread arrival angles whose phases
// advance at k v(t) cos(psi_i). Same seed, same stream, bit for bit.
class CsiGenerator {
public:
    CsiGenerator(Scenario scenario, std::uint64_t seed);

    bool next(CsiFrame &frame);
    std::size_t total_frames() const { return total_; }
    std::size_t produced() const { return index_; }
    const Scenario &scenario() const { return scenario_; }
    const std::vector<double> &subcarrier_freqs() const { return freqs_; }
    GroundTruth ground_truth() const;

    // Instantaneous speed (m/s, signed for micro-motion) and moving-gain fraction at t.
    double speed_at(double t) const;

private:
    double jitter(double t) const;

    Scenario scenario_;
    std::vector<double> freqs_;
    std::vector<Complex> static_response_;
    std::vector<double> ray_cos_;
    std::vector<double> ray_phase_;
    std::vector<Complex> ray_state_;
    double jitter_freq_[3]{};
    double jitter_phase_[3]{};
    double jitter_amp_[3]{};
    double path_ = 0.0;      // integrated signed path length
    double moving_ = 1.0;    // smoothed moving fraction
    std::size_t total_ = 0;
    std::size_t index_ = 0;
    double k_ = 0.0;
    std::mt19937_64 noise_rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Whole capture in memory, for tests and small scenarios.
struct SyntheticCapture {
    std::vector<CsiFrame> frames;
    GroundTruth truth;
};
SyntheticCapture generate_csi(const Scenario &scenario, std::uint64_t seed);

// Named scenarios: approach_dwell_leave, empty_room, approach_abort, short_path.
// start_distance applies to the approach scenarios (short_path defaults to 3 m).
Scenario preset_scenario(std::string_view name, std::uint64_t seed = 0, double start_distance = -1.0);

// Scenario documents (see docs in README). Presets are referenced as {"preset": name}.
Scenario scenario_from_json(const std::string &json_text, std::uint64_t seed = 0);
std::string scenario_to_json(const Scenario &scenario);

std::string ground_truth_jsonl(const GroundTruth &truth);
GroundTruth parse_ground_truth_jsonl(std::istream &in);

} // namespace proxdet

#endif
