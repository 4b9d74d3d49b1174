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
#include "proxdet/pipeline.hpp"

#include "proxdet/diagnostics.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <limits>

namespace proxdet {

namespace {

// Speed history kept before the gait window so edge peaks get their full prominence;
// half of the slowest accepted gait cycle.
constexpr double kGaitContext_s = 1.0;

std::size_t samples(double seconds, double rate)
{
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

PipelineConfig checked(PipelineConfig cfg)
{
    auto problems = cfg.violations();
    if (!problems.empty()) {
        std::string msg = "invalid pipeline config:";
        for (const auto &p : problems)
            msg += "\n  - " + p;
        throw ParameterError(msg);
    }
    return cfg;
}

} // namespace

ProximityDetector::ProximityDetector(PipelineConfig cfg, std::size_t num_subcarriers, PipelineSinks sinks)
    : cfg_(checked(std::move(cfg))),
      num_subcarriers_(num_subcarriers),
      sinks_(std::move(sinks)),
      k_(wave_number(cfg_.center_freq)),
      acf_len_(samples(cfg_.acf.window_s, cfg_.sample_rate)),
      acf_hop_(std::max<std::size_t>(1, samples(cfg_.acf.hop_s, cfg_.sample_rate))),
      max_lag_(samples(cfg_.acf.max_lag_s, cfg_.sample_rate)),
      factor_(cfg_.downsample_factor()),
      hampel_(num_subcarriers, cfg_.hampel.window, cfg_.hampel.n_sigmas),
      fp_len_(samples(cfg_.fp_window_s, cfg_.downsample_to))
{
    if (num_subcarriers < 2)
        throw ParameterError("detector needs at least 2 subcarriers");
    ring_.assign(num_subcarriers_ * acf_len_, 0.0);
    engine_ = std::make_unique<AcfEngine>(acf_len_, max_lag_);
    scratch_acf_.lag_step = 1.0 / cfg_.sample_rate;
    scratch_acf_.num_lags = max_lag_ + 1;
    scratch_acf_.num_subcarriers = num_subcarriers_;
    scratch_acf_.values.assign(scratch_acf_.num_lags * num_subcarriers_, 0.0);
    scratch_acf_.has_variance.assign(num_subcarriers_, false);
    column_.resize(acf_len_);
    rho_.resize(max_lag_ + 1);
    block_.g.assign(num_subcarriers_, 0.0);
}

ProximityDetector::~ProximityDetector() = default;

void ProximityDetector::push(const CsiFrame &frame)
{
    if (frame.csi.size() != num_subcarriers_)
        throw DataError("CSI frame width " + std::to_string(frame.csi.size()) + " does not match detector width " +
                        std::to_string(num_subcarriers_));
    push(power_response(frame));
}

void ProximityDetector::push(const PowerFrame &frame)
{
    if (finished_)
        throw StreamError("detector already finished");
    if (frame.g.size() != num_subcarriers_)
        throw DataError("power frame width mismatch");
    if (last_ts_) {
        const double dt = frame.timestamp - *last_ts_;
        if (dt < 0.0)
            throw StreamError("frame at t=" + std::to_string(frame.timestamp) + " precedes t=" +
                              std::to_string(*last_ts_));
        const double period = 1.0 / cfg_.sample_rate;
        if (std::abs(dt - period) > cfg_.jitter_tolerance * period) {
            if (jitter_violations_ == 0)
                warn("frame spacing at t=" + std::to_string(frame.timestamp) + " deviates from the nominal " +
                     std::to_string(cfg_.sample_rate) + " Hz rate; continuing");
            ++jitter_violations_;
        }
    }
    last_ts_ = frame.timestamp;
    PowerFrame normalized;
    try {
        normalized = normalize_frame(frame);
    } catch (const DegenerateFrameError &e) {
        if (dropped_ == 0)
            warn(std::string(e.what()) + "; frame dropped");
        ++dropped_;
        return;
    }
    push_normalized(normalized);
}

void ProximityDetector::push_normalized(const PowerFrame &f)
{
    for (std::size_t s = 0; s < num_subcarriers_; ++s)
        ring_[s * acf_len_ + ring_pos_] = f.g[s];
    ring_pos_ = (ring_pos_ + 1) % acf_len_;
    ++full_count_;
    if (full_count_ >= acf_len_ && (full_count_ - acf_len_) % acf_hop_ == 0)
        run_acf(f.timestamp);

    for (std::size_t s = 0; s < num_subcarriers_; ++s)
        block_.g[s] += f.g[s];
    block_ts_ += f.timestamp;
    if (++block_count_ == factor_) {
        const double inv = 1.0 / static_cast<double>(factor_);
        PowerFrame mean{block_ts_ * inv, block_.g};
        for (double &v : mean.g)
            v *= inv;
        std::fill(block_.g.begin(), block_.g.end(), 0.0);
        block_ts_ = 0.0;
        block_count_ = 0;
        for (auto &out : hampel_.push(std::move(mean)))
            on_proximity_frame(std::move(out));
    }
    drain(false);
}

void ProximityDetector::run_acf(double window_end)
{
    // ring_pos_ now points at the oldest sample of the window.
    for (std::size_t s = 0; s < num_subcarriers_; ++s) {
        const double *col = ring_.data() + s * acf_len_;
        std::copy(col + ring_pos_, col + acf_len_, column_.begin());
        std::copy(col, col + ring_pos_, column_.begin() + static_cast<std::ptrdiff_t>(acf_len_ - ring_pos_));
        const bool ok = engine_->compute(column_, rho_);
        scratch_acf_.has_variance[s] = ok;
        for (std::size_t l = 0; l <= max_lag_; ++l)
            scratch_acf_.values[l * num_subcarriers_ + s] = rho_[l];
    }
    AcfResult acf = combine_acf(scratch_acf_, window_end);
    SpeedEstimate est = estimate_speed(acf, k_, cfg_.acf.prominence_floor);
    if (sinks_.on_acf)
        sinks_.on_acf(acf, est);
    pending_.push_back({window_end, est});
}

void ProximityDetector::on_proximity_frame(PowerFrame frame)
{
    prox_.push_back(std::move(frame));
}

void ProximityDetector::drain(bool final)
{
    while (!pending_.empty()) {
        const Tick tick = pending_.front();
        if (!final && (prox_.empty() || !(prox_.back().timestamp > tick.t)))
            break;
        pending_.pop_front();

        // Proximity frames with timestamp <= tick, keep only the trailing fp window.
        std::size_t upto = 0;
        while (upto < prox_.size() && prox_[upto].timestamp <= tick.t)
            ++upto;
        while (upto > fp_len_) {
            prox_.pop_front();
            --upto;
        }
        if (upto < 10)
            continue;
        PowerSeries window;
        window.sample_rate = cfg_.downsample_to;
        window.num_subcarriers = num_subcarriers_;
        window.frames.assign(prox_.begin(), prox_.begin() + static_cast<std::ptrdiff_t>(upto));
        emit(tick, proximity_feature(window));
    }
}

void ProximityDetector::emit(const Tick &tick, double fp)
{
    const double t = tick.t;
    SpeedEstimate est = tick.est;
    if (est.found)
        last_found_ = tick;
    else if (last_found_ && t - last_found_->t <= cfg_.estimate_hold_s + 1e-9)
        est = last_found_->est;
    fp_hist_.push_back({t, fp});
    while (!fp_hist_.empty() && fp_hist_.front().t < t - cfg_.slope_window_s - cfg_.acf.hop_s)
        fp_hist_.pop_front();
    speed_hist_.push_back({t, tick.est.found ? tick.est.v_hat : std::numeric_limits<double>::quiet_NaN()});
    while (!speed_hist_.empty() && speed_hist_.front().t < t - cfg_.gait_window_s - kGaitContext_s)
        speed_hist_.pop_front();

    tmp_hist_.assign(fp_hist_.begin(), fp_hist_.end());
    const ReadyValue fs = slope(tmp_hist_, cfg_.slope_window_s);
    tmp_hist_.assign(speed_hist_.begin(), speed_hist_.end());
    const ReadyValue c = gait_cycle_rate(tmp_hist_, cfg_.gait_window_s, cfg_.gait_min_prominence);

    FeatureSample s;
    s.t = t;
    s.fp = fp;
    s.fs = fs.ready ? fs.value : 0.0;
    s.v_hat = est.found ? est.v_hat : 0.0;
    s.c = c.ready ? c.value : 0.0;
    s.fg = gait_score(est, s.c, cfg_.gait);
    if (sinks_.on_feature)
        sinks_.on_feature(s);

    auto r = step(fsm_, s, cfg_.fsm);
    fsm_ = r.state;
    if (r.event) {
        events_.push_back(*r.event);
        if (sinks_.on_event)
            sinks_.on_event(*r.event);
    }
    if (sinks_.on_state)
        sinks_.on_state(t, fsm_.state);
}

void ProximityDetector::finish()
{
    if (finished_)
        return;
    for (auto &out : hampel_.finish())
        on_proximity_frame(std::move(out));
    drain(true);
    finished_ = true;
    if (jitter_violations_ > 1)
        warn(std::to_string(jitter_violations_) + " frames violated the timestamp jitter tolerance");
    if (dropped_ > 1)
        warn(std::to_string(dropped_) + " degenerate frames dropped");
}

DetectionRun run_capture(CaptureReader &reader, const PipelineConfig &cfg_in, PipelineSinks sinks)
{
    PipelineConfig cfg = cfg_in;
    const auto &h = reader.header();
    if (h.sample_rate != cfg.sample_rate || h.center_freq != cfg.center_freq || h.bandwidth != cfg.bandwidth) {
        warn("capture header overrides configured sample_rate/center_freq/bandwidth");
        cfg.sample_rate = h.sample_rate;
        cfg.center_freq = h.center_freq;
        cfg.bandwidth = h.bandwidth;
    }
    DetectionRun run;
    auto user_feature = sinks.on_feature;
    sinks.on_feature = [&run, user_feature](const FeatureSample &s) {
        run.features.push_back(s);
        if (user_feature)
            user_feature(s);
    };
    ProximityDetector det(cfg, h.num_subcarriers, std::move(sinks));
    if (h.kind == CaptureKind::Csi) {
        CsiFrame f;
        while (reader.next(f)) {
            det.push(f);
            ++run.frames;
        }
    } else {
        PowerFrame f;
        while (reader.next(f)) {
            det.push(f);
            ++run.frames;
        }
    }
    det.finish();
    run.events = det.events();
    run.stream_end = det.last_timestamp().value_or(0.0);
    return run;
}

std::string event_json(const DetectionEvent &e)
{
    nlohmann::json j = {{"kind", to_string(e.kind)},
                        {"t", e.t},
                        {"state_before", to_string(e.state_before)},
                        {"state_after", to_string(e.state_after)}};
    return j.dump();
}

std::vector<DetectionEvent> parse_events_jsonl(std::istream &in)
{
    std::vector<DetectionEvent> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            auto j = nlohmann::json::parse(line);
            DetectionEvent e;
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "NearEntered")
                e.kind = EventKind::NearEntered;
            else if (kind == "NearExited")
                e.kind = EventKind::NearExited;
            else
                throw DataError("line " + std::to_string(no) + ": unknown event kind '" + kind + "'");
            e.t = j.at("t").get<double>();
            auto before = parse_state(j.value("state_before", std::string("Approaching")));
            auto after = parse_state(j.value("state_after", std::string("Near")));
            if (!before || !after)
                throw DataError("line " + std::to_string(no) + ": unknown state name");
            e.state_before = *before;
            e.state_after = *after;
            out.push_back(e);
        } catch (const nlohmann::json::exception &ex) {
            throw DataError("line " + std::to_string(no) + ": not an event record (" + ex.what() + ")");
        }
    }
    return out;
}

} // namespace proxdet
