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
#include "proxdet/fsm.hpp"

#include "proxdet/diagnostics.hpp"

#include <cmath>
#include <string>

namespace proxdet {

std::string_view to_string(State s)
{
    switch (s) {
    case State::Faraway:
        return "Faraway";
    case State::Approaching:
        return "Approaching";
    case State::Near:
        return "Near";
    case State::Leaving:
        return "Leaving";
    }
    return "?";
}

std::optional<State> parse_state(std::string_view name)
{
    for (State s : {State::Faraway, State::Approaching, State::Near, State::Leaving})
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

std::string_view to_string(EventKind k)
{
    return k == EventKind::NearEntered ? "NearEntered" : "NearExited";
}

std::vector<std::string> FsmConfig::violations() const
{
    std::vector<std::string> out;
    for (auto [name, v] : {std::pair{"theta_near", theta_near}, {"theta_far", theta_far}, {"theta_gait", theta_gait},
                           {"theta_slope", theta_slope}, {"timeout_approach", timeout_approach}})
        if (!std::isfinite(v))
            out.push_back(std::string(name) + " must be finite");
    if (!(theta_far < theta_near))
        out.push_back("theta_far must be below theta_near");
    if (debounce < 1)
        out.push_back("debounce must be >= 1");
    if (!(timeout_approach > 0.0))
        out.push_back("timeout_approach must be positive");
    return out;
}

namespace {

StepResult transition(ProximityState st, State to, std::optional<DetectionEvent> event = std::nullopt)
{
    st.state = to;
    st.dwell = 0;
    st.primary = {};
    st.secondary = {};
    return {st, event};
}

} // namespace

StepResult step(const ProximityState &state, const FeatureSample &s, const FsmConfig &cfg)
{
    if (state.last_t && s.t < *state.last_t)
        throw StreamError("feature sample at t=" + std::to_string(s.t) + " arrives after t=" +
                          std::to_string(*state.last_t));
    ProximityState st = state;
    st.last_t = s.t;
    ++st.dwell;

    const bool gait = s.fg > cfg.theta_gait;
    switch (st.state) {
    case State::Faraway:
        st.primary.update(s.fs > cfg.theta_slope && gait, s.t);
        if (st.primary.count >= cfg.debounce)
            return transition(st, State::Approaching);
        break;
    case State::Approaching:
        st.primary.update(s.fp >= cfg.theta_near, s.t);
        st.secondary.update(!gait && s.fp < cfg.theta_near, s.t);
        if (st.primary.count >= cfg.debounce)
            return transition(st, State::Near,
                              DetectionEvent{EventKind::NearEntered, st.primary.first_t, State::Approaching, State::Near});
        if (st.secondary.count > 0 && s.t - st.secondary.first_t >= cfg.timeout_approach)
            return transition(st, State::Faraway);
        break;
    case State::Near:
        st.primary.update(s.fs < -cfg.theta_slope && gait, s.t);
        if (st.primary.count >= cfg.debounce)
            return transition(st, State::Leaving);
        break;
    case State::Leaving:
        st.primary.update(s.fp <= cfg.theta_far, s.t);
        st.secondary.update(s.fp > cfg.theta_near && !gait, s.t);
        if (st.primary.count >= cfg.debounce)
            return transition(st, State::Faraway,
                              DetectionEvent{EventKind::NearExited, st.primary.first_t, State::Leaving, State::Faraway});
        if (st.secondary.count >= cfg.debounce)
            return transition(st, State::Near);
        break;
    }
    return {st, std::nullopt};
}

std::vector<DetectionEvent> run_detector(std::span<const FeatureSample> samples, const FsmConfig &cfg,
                                         std::vector<State> *trajectory)
{
    ProximityState st;
    std::vector<DetectionEvent> events;
    for (const auto &s : samples) {
        auto r = step(st, s, cfg);
        st = r.state;
        if (r.event)
            events.push_back(*r.event);
        if (trajectory)
            trajectory->push_back(st.state);
    }
    return events;
}

} // namespace proxdet
