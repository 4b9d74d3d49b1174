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
#ifndef PROXDET_FSM_HPP
#define PROXDET_FSM_HPP

#include "proxdet/features.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace proxdet {

enum class State { Faraway, Approaching, Near, Leaving };

std::string_view to_string(State s);
std::optional<State> parse_state(std::string_view name);

struct FsmConfig {
    double theta_near = 0.65;
    double theta_far = 0.45;
    double theta_gait = 0.05;
    double theta_slope = 0.02;      // 1/s
    std::size_t debounce = 5;       // consecutive samples
    double timeout_approach = 10.0; // s

    // Human-readable invariant violations; empty when valid.
    std::vector<std::string> violations() const;
};

enum class EventKind { NearEntered, NearExited };

std::string_view to_string(EventKind k);

struct DetectionEvent {
    EventKind kind = EventKind::NearEntered;
    double t = 0.0;
    State state_before = State::Faraway;
    State state_after = State::Faraway;

    bool operator==(const DetectionEvent &) const = default;
};

// Consecutive-sample run of one transition guard.
struct GuardRun {
    std::size_t count = 0;
    double first_t = 0.0;

    void update(bool holds, double t)
    {
        if (!holds) {
            count = 0;
            return;
        }
        if (count == 0)
            first_t = t;
        ++count;
    }
};

struct ProximityState {
    State state = State::Faraway;
    std::size_t dwell = 0;  // samples spent in the current state
    std::optional<double> last_t;
    // Guard runs, reset on every transition. Their meaning depends on `state`.
    GuardRun primary;
    GuardRun secondary;

    bool operator==(const ProximityState &o) const
    {
        return state == o.state && dwell == o.dwell && last_t == o.last_t && primary.count == o.primary.count &&
               secondary.count == o.secondary.count;
    }
};

struct StepResult {
    ProximityState state;
    std::optional<DetectionEvent> event;
};

// One transition of the four-state machine. Throws StreamError on out-of-order samples.
StepResult step(const ProximityState &state, const FeatureSample &s, const FsmConfig &cfg);

// Folds step() over a stream starting from Faraway.
std::vector<DetectionEvent> run_detector(std::span<const FeatureSample> samples, const FsmConfig &cfg,
                                         std::vector<State> *trajectory = nullptr);

} // namespace proxdet

#endif
