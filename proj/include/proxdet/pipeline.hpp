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
#ifndef PROXDET_PIPELINE_HPP
#define PROXDET_PIPELINE_HPP

#include "proxdet/config.hpp"
#include "proxdet/csi.hpp"
#include "proxdet/csi_io.hpp"
#include "proxdet/features.hpp"
#include "proxdet/fsm.hpp"
#include "proxdet/spectral.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace proxdet {

// Optional taps on the intermediate streams.
struct PipelineSinks {
    std::function<void(const FeatureSample &)> on_feature;
    std::function<void(const DetectionEvent &)> on_event;
    std::function<void(const AcfResult &, const SpeedEstimate &)> on_acf;
    std::function<void(double t, State)> on_state;
};

// Streaming detector. Full-rate power feeds the ACF/gait branch; the block-mean
// downsampled, Hampel-filtered stream feeds the proximity branch. Both are fused at
// each ACF window end and fed through the state machine. Memory is bounded by the
// analysis windows, independent of the stream length.
class ProximityDetector {
public:
    ProximityDetector(PipelineConfig cfg, std::size_t num_subcarriers, PipelineSinks sinks = {});
    ~ProximityDetector();
    ProximityDetector(const ProximityDetector &) = delete;
    ProximityDetector &operator=(const ProximityDetector &) = delete;

    void push(const CsiFrame &frame);
    void push(const PowerFrame &frame);  // raw (un-normalized) power response
    void finish();

    const std::vector<DetectionEvent> &events() const { return events_; }
    State state() const { return fsm_.state; }
    std::size_t dropped_frames() const { return dropped_; }
    std::size_t jitter_violations() const { return jitter_violations_; }
    std::optional<double> last_timestamp() const { return last_ts_; }

private:
    struct Tick {
        double t;
        SpeedEstimate est;
    };

    void push_normalized(const PowerFrame &frame);
    void on_proximity_frame(PowerFrame frame);
    void run_acf(double window_end);
    void drain(bool final);
    void emit(const Tick &tick, double fp);

    PipelineConfig cfg_;
    std::size_t num_subcarriers_;
    PipelineSinks sinks_;
    double k_;

    // full-rate ring buffer, subcarrier-major
    std::size_t acf_len_;
    std::size_t acf_hop_;
    std::size_t max_lag_;
    std::vector<double> ring_;
    std::size_t ring_pos_ = 0;
    std::size_t full_count_ = 0;
    std::unique_ptr<AcfEngine> engine_;
    SubcarrierAcf scratch_acf_;
    std::vector<double> column_;
    std::vector<double> rho_;

    // downsampled branch
    std::size_t factor_;
    PowerFrame block_;
    std::size_t block_count_ = 0;
    double block_ts_ = 0.0;
    HampelStream hampel_;
    std::deque<PowerFrame> prox_;
    std::size_t fp_len_;

    std::deque<Tick> pending_;
    std::deque<TimedValue> fp_hist_;
    std::deque<TimedValue> speed_hist_;
    std::vector<TimedValue> tmp_hist_;
    std::optional<Tick> last_found_;

    ProximityState fsm_;
    std::vector<DetectionEvent> events_;
    std::optional<double> last_ts_;
    std::size_t dropped_ = 0;
    std::size_t jitter_violations_ = 0;
    bool finished_ = false;
};

struct DetectionRun {
    std::vector<DetectionEvent> events;
    std::vector<FeatureSample> features;
    double stream_end = 0.0;
    std::size_t frames = 0;
};

// Runs a whole capture through a detector, collecting events and features.
DetectionRun run_capture(CaptureReader &reader, const PipelineConfig &cfg, PipelineSinks sinks = {});

// JSON-lines event record.
std::string event_json(const DetectionEvent &e);
std::vector<DetectionEvent> parse_events_jsonl(std::istream &in);

} // namespace proxdet

#endif
