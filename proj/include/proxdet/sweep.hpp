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
#ifndef PROXDET_SWEEP_HPP
#define PROXDET_SWEEP_HPP

#include "proxdet/config.hpp"
#include "proxdet/eval.hpp"
#include "proxdet/features.hpp"
#include "proxdet/fsm.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace proxdet {

// Threshold grid; every combination of the listed values is evaluated.
struct SweepGrid {
    std::vector<double> theta_near{0.6, 0.65, 0.7};
    std::vector<double> theta_far{0.4, 0.45, 0.5};
    std::vector<double> theta_gait{0.03, 0.05, 0.08};
    std::vector<double> theta_slope{0.02};
    std::vector<std::size_t> debounce{5};

    std::size_t size() const;
};

// Lists absent from the document fall back to the single value of `base`.
SweepGrid sweep_grid_from_json(const std::string &text, const FsmConfig &base);

// Features are threshold independent, so a capture is processed once and
// only the state machine is rerun per grid point.
struct SweepCapture {
    std::string name;
    std::vector<FeatureSample> features;
    GroundTruth truth;
};

// Pairs every `<name>.csi` with `<name>.gt.jsonl` in `dir`.
std::vector<SweepCapture> load_corpus(const std::filesystem::path &dir, const PipelineConfig &cfg);

struct SweepRow {
    FsmConfig fsm;
    bool accepted = false;
    std::string reason;  // why the row was rejected
    EvalReport report;
    bool pareto = false;
};

std::vector<SweepRow> run_sweep(const std::vector<SweepCapture> &corpus, const FsmConfig &base,
                                const SweepGrid &grid);

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

} // namespace proxdet

#endif
