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
#include "proxdet/sweep.hpp"

#include "proxdet/csi_io.hpp"
#include "proxdet/diagnostics.hpp"
#include "proxdet/pipeline.hpp"
#include "proxdet/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace proxdet {

std::size_t SweepGrid::size() const
{
    return theta_near.size() * theta_far.size() * theta_gait.size() * theta_slope.size() * debounce.size();
}

namespace {

template <class T>
std::vector<T> read_list(const nlohmann::json &j, const char *key, T fallback)
{
    if (!j.contains(key))
        return {fallback};
    const auto &v = j.at(key);
    if (!v.is_array()) {
        if (!v.is_number())
            throw ParameterError(std::string("grid field '") + key + "' must be a number or a list of numbers");
        return {v.get<T>()};
    }
    if (v.empty())
        throw ParameterError(std::string("grid field '") + key + "' is empty");
    std::vector<T> out;
    for (const auto &x : v) {
        if (!x.is_number())
            throw ParameterError(std::string("grid field '") + key + "' must contain numbers");
        out.push_back(x.get<T>());
    }
    return out;
}

std::string optional_cell(const std::optional<double> &v)
{
    return v ? format_double(*v) : std::string();
}

} // namespace

SweepGrid sweep_grid_from_json(const std::string &text, const FsmConfig &base)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParameterError(std::string("grid is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParameterError("grid must be a JSON object");
    SweepGrid g;
    g.theta_near = read_list<double>(j, "theta_near", base.theta_near);
    g.theta_far = read_list<double>(j, "theta_far", base.theta_far);
    g.theta_gait = read_list<double>(j, "theta_gait", base.theta_gait);
    g.theta_slope = read_list<double>(j, "theta_slope", base.theta_slope);
    g.debounce = read_list<std::size_t>(j, "debounce", base.debounce);
    return g;
}

std::vector<SweepCapture> load_corpus(const std::filesystem::path &dir, const PipelineConfig &cfg)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw DataError("corpus directory '" + dir.string() + "' does not exist");
    std::vector<fs::path> captures;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csi")
            captures.push_back(entry.path());
    std::sort(captures.begin(), captures.end());
    if (captures.empty())
        throw DataError("corpus directory '" + dir.string() + "' contains no .csi captures");

    std::vector<SweepCapture> out;
    for (const auto &path : captures) {
        auto gt_path = path;
        gt_path.replace_extension(".gt.jsonl");
        std::ifstream gt_in(gt_path);
        if (!gt_in)
            throw DataError("missing ground truth '" + gt_path.string() + "'");
        std::ifstream in(path);
        if (!in)
            throw DataError("cannot open '" + path.string() + "'");
        SweepCapture c;
        c.name = path.stem().string();
        c.truth = parse_ground_truth_jsonl(gt_in);
        CaptureReader reader(in);
        c.features = run_capture(reader, cfg).features;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepCapture> &corpus, const FsmConfig &base,
                                const SweepGrid &grid)
{
    if (corpus.empty())
        throw DataError("sweep corpus is empty");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double tn : grid.theta_near)
        for (double tf : grid.theta_far)
            for (double tg : grid.theta_gait)
                for (double ts : grid.theta_slope)
                    for (std::size_t db : grid.debounce) {
                        SweepRow row;
                        row.fsm = base;
                        row.fsm.theta_near = tn;
                        row.fsm.theta_far = tf;
                        row.fsm.theta_gait = tg;
                        row.fsm.theta_slope = ts;
                        row.fsm.debounce = db;
                        auto problems = row.fsm.violations();
                        if (!problems.empty()) {
                            for (std::size_t i = 0; i < problems.size(); ++i)
                                row.reason += (i ? "; " : "") + problems[i];
                            rows.push_back(std::move(row));
                            continue;
                        }
                        std::vector<EvalReport> reports;
                        for (const auto &c : corpus) {
                            auto events = run_detector(c.features, row.fsm);
                            reports.push_back(evaluate(detection_intervals(events), c.truth));
                        }
                        row.report = merge(reports);
                        row.accepted = true;
                        rows.push_back(std::move(row));
                    }

    // Pareto set over (IA up, FA down); a missing metric counts as neutral.
    auto ia = [](const SweepRow &r) { return r.report.ia.value_or(0.0); };
    auto fa = [](const SweepRow &r) { return r.report.fa.value_or(0.0); };
    for (auto &r : rows) {
        if (!r.accepted)
            continue;
        r.pareto = std::none_of(rows.begin(), rows.end(), [&](const SweepRow &o) {
            return o.accepted && ia(o) >= ia(r) && fa(o) <= fa(r) && (ia(o) > ia(r) || fa(o) < fa(r));
        });
    }
    return rows;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
{
    os << "theta_near,theta_far,theta_gait,theta_slope,debounce,status,ia,da,fa,tau_mean,pareto\n";
    for (const auto &r : rows) {
        os << format_double(r.fsm.theta_near) << ',' << format_double(r.fsm.theta_far) << ','
           << format_double(r.fsm.theta_gait) << ',' << format_double(r.fsm.theta_slope) << ',' << r.fsm.debounce
           << ',';
        if (!r.accepted) {
            std::string reason = r.reason;
            std::replace(reason.begin(), reason.end(), '"', '\'');
            os << "\"rejected: " << reason << "\",,,,,0\n";
            continue;
        }
        os << "ok," << optional_cell(r.report.ia) << ',' << optional_cell(r.report.da) << ','
           << optional_cell(r.report.fa) << ',';
        if (r.report.n_matched > 0)
            os << format_double(r.report.tau_mean);
        os << ',' << (r.pareto ? 1 : 0) << '\n';
    }
}

} // namespace proxdet
