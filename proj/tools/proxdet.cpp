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
// Command line front end: detect, synth, eval, sweep.

#include "proxdet/config.hpp"
#include "proxdet/csi_io.hpp"
#include "proxdet/diagnostics.hpp"
#include "proxdet/eval.hpp"
#include "proxdet/pipeline.hpp"
#include "proxdet/sweep.hpp"
#include "proxdet/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace proxdet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    return out;
}

PipelineConfig load_config(const std::string &path)
{
    if (path.empty())
        return {};
    return config_from_json(slurp(path));
}

fs::path sidecar_path(fs::path capture)
{
    return capture.replace_extension(".gt.jsonl");
}

struct DetectArgs {
    std::string input;
    std::string config;
    std::string trace_features;
    std::string trace_acf;
    std::string trace_states;
    std::string out;
};

int cmd_detect(const DetectArgs &a)
{
    const PipelineConfig cfg = load_config(a.config);
    std::ifstream in(a.input);
    if (!in)
        throw UsageError("cannot open '" + a.input + "'");

    std::ofstream features_out, acf_out, states_out, events_file;
    PipelineSinks sinks;
    if (!a.trace_features.empty()) {
        features_out = open_out(a.trace_features);
        features_out << "t,fp,fs,v_hat,c,fg\n";
        sinks.on_feature = [&](const FeatureSample &s) {
            features_out << format_double(s.t) << ',' << format_double(s.fp) << ',' << format_double(s.fs) << ','
                         << format_double(s.v_hat) << ',' << format_double(s.c) << ',' << format_double(s.fg)
                         << '\n';
        };
    }
    if (!a.trace_acf.empty()) {
        acf_out = open_out(a.trace_acf);
        acf_out << "window_end,lag,acf,acf_diff\n";
        sinks.on_acf = [&](const AcfResult &r, const SpeedEstimate &) {
            for (std::size_t i = 0; i < r.lags.size(); ++i) {
                acf_out << format_double(r.window_end) << ',' << format_double(r.lags[i]) << ','
                        << format_double(r.acf[i]) << ',';
                if (i < r.acf_diff.size())
                    acf_out << format_double(r.acf_diff[i]);
                acf_out << '\n';
            }
        };
    }
    if (!a.trace_states.empty()) {
        states_out = open_out(a.trace_states);
        states_out << "t,state\n";
        sinks.on_state = [&](double t, State s) { states_out << format_double(t) << ',' << to_string(s) << '\n'; };
    }
    std::ostream *events = &std::cout;
    if (!a.out.empty()) {
        events_file = open_out(a.out);
        events = &events_file;
    }
    sinks.on_event = [&](const DetectionEvent &e) { *events << event_json(e) << '\n'; };

    CaptureReader reader(in);
    run_capture(reader, cfg, std::move(sinks));
    events->flush();
    return kExitOk;
}

struct SynthArgs {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string out;
    double duration = 0.0;
};

int cmd_synth(const SynthArgs &a)
{
    Scenario sc;
    if (fs::exists(a.scenario))
        sc = scenario_from_json(slurp(a.scenario), a.seed);
    else
        sc = preset_scenario(a.scenario, a.seed);
    if (a.duration > 0.0)
        sc.duration = a.duration;

    CsiGenerator gen(sc, a.seed);
    const auto &scene = gen.scenario().scene;
    CaptureHeader h;
    h.kind = CaptureKind::Csi;
    h.num_subcarriers = scene.num_subcarriers;
    h.sample_rate = scene.sample_rate;
    h.center_freq = scene.center_freq;
    h.bandwidth = scene.bandwidth;

    auto out = open_out(a.out);
    CaptureWriter writer(out, h);
    CsiFrame f;
    while (gen.next(f))
        writer.write(f);
    out.flush();
    if (!out)
        throw DataError("write to '" + a.out + "' failed");
    auto gt = open_out(sidecar_path(a.out).string());
    gt << ground_truth_jsonl(gen.ground_truth());
    return kExitOk;
}

struct EvalArgs {
    std::string events;
    std::string truth;
    std::string out;
};

int cmd_eval(const EvalArgs &a)
{
    std::ifstream ev(a.events);
    if (!ev)
        throw UsageError("cannot open '" + a.events + "'");
    std::ifstream gt(a.truth);
    if (!gt)
        throw UsageError("cannot open '" + a.truth + "'");
    auto events = parse_events_jsonl(ev);
    auto truth = parse_ground_truth_jsonl(gt);
    EvalReport report = evaluate(detection_intervals(events), truth);
    const std::string json = report_json(report);
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << json << '\n';
    }
    std::cout << json << '\n';
    std::vector<std::pair<std::string, EvalReport>> rows{{fs::path(a.events).stem().string(), report}};
    print_table(std::cout, rows);
    return kExitOk;
}

struct SweepArgs {
    std::string corpus;
    std::string grid;
    std::string config;
    std::string out;
};

int cmd_sweep(const SweepArgs &a)
{
    const PipelineConfig cfg = load_config(a.config);
    SweepGrid grid;
    if (!a.grid.empty())
        grid = sweep_grid_from_json(slurp(a.grid), cfg.fsm);
    auto corpus = load_corpus(a.corpus, cfg);
    auto rows = run_sweep(corpus, cfg.fsm, grid);
    if (a.out.empty()) {
        write_sweep_csv(std::cout, rows);
    } else {
        auto out = open_out(a.out);
        write_sweep_csv(out, rows);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"WiFi CSI proximity detection with gait monitoring"};
    app.require_subcommand(1);

    DetectArgs detect;
    auto *d = app.add_subcommand("detect", "Run the detector over a capture and emit enter/exit events as JSONL");
    d->add_option("input", detect.input, "Capture file (csi or power)")->required();
    d->add_option("--config", detect.config, "Pipeline config JSON");
    d->add_option("--trace-features", detect.trace_features, "Write per-tick features CSV");
    d->add_option("--trace-acf", detect.trace_acf, "Write combined ACF and its differential CSV");
    d->add_option("--trace-states", detect.trace_states, "Write per-tick FSM state CSV");
    d->add_option("--out", detect.out, "Events output (default stdout)");

    SynthArgs synth;
    auto *s = app.add_subcommand("synth", "Generate a synthetic capture and its ground-truth sidecar");
    s->add_option("scenario", synth.scenario,
                  "Preset name (approach_dwell_leave, short_path, approach_abort, empty_room) or scenario JSON")
        ->required();
    s->add_option("--seed", synth.seed, "Random seed");
    s->add_option("--out", synth.out, "Capture output path; the sidecar is written next to it as .gt.jsonl")
        ->required();
    s->add_option("--duration", synth.duration, "Override the scenario duration in seconds");

    EvalArgs ev;
    auto *e = app.add_subcommand("eval", "Score detected events against ground truth");
    e->add_option("events", ev.events, "Events JSONL")->required();
    e->add_option("truth", ev.truth, "Ground truth JSONL")->required();
    e->add_option("--out", ev.out, "Also write the JSON report here");

    SweepArgs sw;
    auto *w = app.add_subcommand("sweep", "Evaluate a threshold grid over a corpus directory");
    w->add_option("corpus", sw.corpus, "Directory of <name>.csi + <name>.gt.jsonl pairs")->required();
    w->add_option("--grid", sw.grid, "Grid JSON with lists for theta_near, theta_far, theta_gait, ...");
    w->add_option("--config", sw.config, "Pipeline config JSON");
    w->add_option("--out", sw.out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp &ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError &ex) {
        app.exit(ex);
        return kExitUsage;
    }

    try {
        if (*d)
            return cmd_detect(detect);
        if (*s)
            return cmd_synth(synth);
        if (*e)
            return cmd_eval(ev);
        if (*w)
            return cmd_sweep(sw);
    } catch (const UsageError &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const DataError &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitData;
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
