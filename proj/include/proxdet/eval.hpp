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
#ifndef PROXDET_EVAL_HPP
#define PROXDET_EVAL_HPP

#include "proxdet/fsm.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace proxdet {

// Interval during which the target area was truly occupied.
struct GroundTruthEvent {
    double enter_t = 0.0;
    double exit_t = 0.0;

    bool operator==(const GroundTruthEvent &) const = default;
};

// Interval during which the target area was truly empty (false-alarm denominator unit).
struct EmptySegment {
    double start_t = 0.0;
    double end_t = 0.0;

    bool operator==(const EmptySegment &) const = default;
};

struct GroundTruth {
    std::vector<GroundTruthEvent> events;
    std::vector<EmptySegment> empty_segments;
};

// A system Near interval; exit_t is empty when the stream ended in Near.
struct DetectionInterval {
    double enter_t = 0.0;
    std::optional<double> exit_t;

    double end() const;  // +inf when open
};

struct MatchedPair {
    std::size_t gt_index = 0;
    std::size_t detection_index = 0;

    bool operator==(const MatchedPair &) const = default;
};

// Pairs NearEntered/NearExited events into intervals. Throws DataError when the
// events do not alternate starting with NearEntered.
std::vector<DetectionInterval> detection_intervals(std::span<const DetectionEvent> events);

// Greedy one-to-one matching in time order; a pair needs overlapping intervals.
// Both inputs must be time ordered; overlapping detections throw DataError.
std::vector<MatchedPair> match_events(std::span<const DetectionInterval> detections,
                                      std::span<const GroundTruthEvent> gt);

std::optional<double> instance_accuracy(std::size_t matched, std::size_t gt_count);

// min(1, overlap / T_GT); empty for open detections or zero-length ground truth.
std::optional<double> duration_accuracy(const DetectionInterval &detection, const GroundTruthEvent &gt);

// Signed entry delay, positive when the system is late.
double responsiveness(const DetectionInterval &detection, const GroundTruthEvent &gt);

std::optional<double> false_alarm_rate(std::size_t false_detections, std::size_t empty_segments);

// Detections that overlap no ground-truth event.
std::size_t count_false_detections(std::span<const DetectionInterval> detections,
                                   std::span<const GroundTruthEvent> gt);

struct EvalReport {
    std::optional<double> ia;
    std::optional<double> da;
    double tau_mean = 0.0;  // mean |tau| over matched pairs
    std::vector<double> tau_per_event;
    std::optional<double> fa;
    std::vector<MatchedPair> matched_pairs;

    // Raw counts; reports over several captures are combined through these.
    std::size_t n_gt = 0;
    std::size_t n_detections = 0;
    std::size_t n_matched = 0;
    std::size_t n_false = 0;
    std::size_t n_empty = 0;
    std::vector<double> da_per_pair;
};

EvalReport evaluate(std::vector<DetectionInterval> detections, GroundTruth truth);

// Pools several per-capture reports (matched_pairs indices stay capture-local).
EvalReport merge(std::span<const EvalReport> reports);

std::string report_json(const EvalReport &report);
void print_table(std::ostream &os, std::span<const std::pair<std::string, EvalReport>> rows);

} // namespace proxdet

#endif
