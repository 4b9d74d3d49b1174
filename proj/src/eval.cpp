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
#include "proxdet/eval.hpp"

#include "proxdet/diagnostics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace proxdet {

double DetectionInterval::end() const
{
    return exit_t.value_or(std::numeric_limits<double>::infinity());
}

std::vector<DetectionInterval> detection_intervals(std::span<const DetectionEvent> events)
{
    std::vector<DetectionInterval> out;
    bool open = false;
    for (const auto &e : events) {
        if (e.kind == EventKind::NearEntered) {
            if (open)
                throw DataError("two NearEntered events without NearExited in between");
            out.push_back({e.t, std::nullopt});
            open = true;
        } else {
            if (!open)
                throw DataError("NearExited without a preceding NearEntered");
            out.back().exit_t = e.t;
            open = false;
        }
    }
    return out;
}

namespace {

bool overlaps(const DetectionInterval &d, const GroundTruthEvent &g)
{
    return d.enter_t < g.exit_t && d.end() > g.enter_t;
}

} // namespace

std::vector<MatchedPair> match_events(std::span<const DetectionInterval> detections,
                                      std::span<const GroundTruthEvent> gt)
{
    for (std::size_t i = 1; i < detections.size(); ++i)
        if (detections[i].enter_t < detections[i - 1].end())
            throw DataError("detection intervals overlap or are out of order");
    std::vector<MatchedPair> pairs;
    std::vector<bool> used(detections.size(), false);
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t d = 0; d < detections.size(); ++d) {
            if (!used[d] && overlaps(detections[d], gt[g])) {
                used[d] = true;
                pairs.push_back({g, d});
                break;
            }
        }
    }
    return pairs;
}

std::optional<double> instance_accuracy(std::size_t matched, std::size_t gt_count)
{
    if (gt_count == 0)
        return std::nullopt;
    return static_cast<double>(matched) / static_cast<double>(gt_count);
}

std::optional<double> duration_accuracy(const DetectionInterval &detection, const GroundTruthEvent &gt)
{
    const double t_gt = gt.exit_t - gt.enter_t;
    if (!detection.exit_t || !(t_gt > 0.0))
        return std::nullopt;
    const double overlap = std::max(0.0, std::min(*detection.exit_t, gt.exit_t) - std::max(detection.enter_t, gt.enter_t));
    return std::min(1.0, overlap / t_gt);
}

double responsiveness(const DetectionInterval &detection, const GroundTruthEvent &gt)
{
    return detection.enter_t - gt.enter_t;
}

std::optional<double> false_alarm_rate(std::size_t false_detections, std::size_t empty_segments)
{
    if (empty_segments == 0)
        return std::nullopt;
    return std::min(1.0, static_cast<double>(false_detections) / static_cast<double>(empty_segments));
}

std::size_t count_false_detections(std::span<const DetectionInterval> detections,
                                   std::span<const GroundTruthEvent> gt)
{
    std::size_t n = 0;
    for (const auto &d : detections)
        if (std::none_of(gt.begin(), gt.end(), [&](const auto &g) { return overlaps(d, g); }))
            ++n;
    return n;
}

namespace {

void finalize(EvalReport &r)
{
    r.ia = instance_accuracy(r.n_matched, r.n_gt);
    r.fa = false_alarm_rate(r.n_false, r.n_empty);
    r.da.reset();
    if (!r.da_per_pair.empty()) {
        double s = 0.0;
        for (double v : r.da_per_pair)
            s += v;
        r.da = s / static_cast<double>(r.da_per_pair.size());
    }
    r.tau_mean = 0.0;
    if (!r.tau_per_event.empty()) {
        double s = 0.0;
        for (double v : r.tau_per_event)
            s += std::abs(v);
        r.tau_mean = s / static_cast<double>(r.tau_per_event.size());
    }
}

} // namespace

EvalReport evaluate(std::vector<DetectionInterval> detections, GroundTruth truth)
{
    std::sort(detections.begin(), detections.end(),
              [](const auto &a, const auto &b) { return a.enter_t < b.enter_t; });
    std::sort(truth.events.begin(), truth.events.end(),
              [](const auto &a, const auto &b) { return a.enter_t < b.enter_t; });

    EvalReport r;
    r.n_gt = truth.events.size();
    r.n_detections = detections.size();
    r.n_empty = truth.empty_segments.size();
    r.matched_pairs = match_events(detections, truth.events);
    r.n_matched = r.matched_pairs.size();
    r.n_false = count_false_detections(detections, truth.events);
    for (const auto &p : r.matched_pairs) {
        const auto &d = detections[p.detection_index];
        const auto &g = truth.events[p.gt_index];
        r.tau_per_event.push_back(responsiveness(d, g));
        if (auto da = duration_accuracy(d, g))
            r.da_per_pair.push_back(*da);
    }
    finalize(r);
    return r;
}

EvalReport merge(std::span<const EvalReport> reports)
{
    EvalReport r;
    for (const auto &x : reports) {
        r.n_gt += x.n_gt;
        r.n_detections += x.n_detections;
        r.n_matched += x.n_matched;
        r.n_false += x.n_false;
        r.n_empty += x.n_empty;
        r.tau_per_event.insert(r.tau_per_event.end(), x.tau_per_event.begin(), x.tau_per_event.end());
        r.da_per_pair.insert(r.da_per_pair.end(), x.da_per_pair.begin(), x.da_per_pair.end());
        r.matched_pairs.insert(r.matched_pairs.end(), x.matched_pairs.begin(), x.matched_pairs.end());
    }
    finalize(r);
    return r;
}

std::string report_json(const EvalReport &r)
{
    using nlohmann::json;
    auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
    json pairs = json::array();
    for (const auto &p : r.matched_pairs)
        pairs.push_back({{"gt_index", p.gt_index}, {"detection_index", p.detection_index}});
    json j = {
        {"ia", opt(r.ia)},
        {"da", opt(r.da)},
        {"tau_mean", r.tau_mean},
        {"tau_per_event", r.tau_per_event},
        {"fa", opt(r.fa)},
        {"matched_pairs", pairs},
        {"n_gt", r.n_gt},
        {"n_detections", r.n_detections},
        {"n_matched", r.n_matched},
        {"n_false", r.n_false},
        {"n_empty", r.n_empty},
    };
    return j.dump(2);
}

void print_table(std::ostream &os, std::span<const std::pair<std::string, EvalReport>> rows)
{
    auto pct = [](const std::optional<double> &v) {
        if (!v)
            return std::string("n/a");
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << *v * 100.0 << '%';
        return s.str();
    };
    os << std::left << std::setw(16) << "Capture" << std::setw(12) << "Samples_IA" << std::setw(10) << "IA"
       << std::setw(10) << "DA" << std::setw(10) << "tau" << std::setw(12) << "Samples_FA" << "FA\n";
    for (const auto &[name, r] : rows) {
        std::ostringstream tau;
        tau << std::fixed << std::setprecision(3) << r.tau_mean << 's';
        os << std::left << std::setw(16) << name << std::setw(12) << r.n_gt << std::setw(10) << pct(r.ia)
           << std::setw(10) << pct(r.da) << std::setw(10) << tau.str() << std::setw(12) << r.n_empty << pct(r.fa)
           << '\n';
    }
}

} // namespace proxdet
