#include "circacp/cli.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "circacp/error.hpp"
#include "circacp/io.hpp"
#include "circacp/plot.hpp"

namespace circacp::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double to_number(std::string_view key, std::string_view value) {
    const std::string v(value);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty() || !std::isfinite(out))
        throw ParseError("config key '" + std::string(key) + "' expects a number, got '" + v + "'");
    return out;
}

int to_int(std::string_view key, std::string_view value) {
    const double d = to_number(key, value);
    if (d != std::floor(d)) throw ParseError("config key '" + std::string(key) + "' expects an integer");
    return static_cast<int>(d);
}

json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    if (std::isnan(v)) return json(nullptr);
    return json(v);
}

json stats_json(const AgreementStats& s) {
    return json{{"n", s.n}, {"bias", s.bias}, {"sd", s.sd}, {"loa_low", s.loa_low}, {"loa_high", s.loa_high}};
}

std::string write_json(const json& j) { return j.dump(2) + "\n"; }

std::string subject_id_of(const std::string& input) { return fs::path(input).stem().string(); }

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    auto& d = cfg.detection;
    if (key == "dichotomize_q") {
        d.dichotomize_q = to_number(key, value);
        if (!(d.dichotomize_q > 0.0 && d.dichotomize_q < 1.0)) throw ParseError("dichotomize_q must lie in (0, 1)");
    } else if (key == "lambda") {
        d.lambda = to_number(key, value);
        if (d.lambda < 0.0) throw ParseError("lambda must be non-negative");
    } else if (key == "edge_guard_minutes") {
        d.edge_guard_minutes = to_number(key, value);
    } else if (key == "refinement_passes") {
        d.refinement_passes = to_int(key, value);
        if (d.refinement_passes < 1) throw ParseError("refinement_passes must be at least 1");
    } else if (key == "ch_delta_threshold") {
        d.ch_delta_threshold = to_number(key, value);
    } else if (key == "positivity_offset") {
        d.positivity_offset = to_number(key, value);
        if (!(d.positivity_offset > 0.0)) throw ParseError("positivity_offset must be positive");
    } else if (key == "min_margin") {
        const int m = to_int(key, value);
        if (m < 1) throw ParseError("min_margin must be at least 1");
        d.min_margin = static_cast<std::size_t>(m);
    } else if (key == "cosinor_init_mes") {
        d.cosinor_init.mes = to_number(key, value);
    } else if (key == "cosinor_init_amp") {
        d.cosinor_init.amp = to_number(key, value);
    } else if (key == "cosinor_init_phi") {
        d.cosinor_init.phi = to_number(key, value);
    } else if (key == "timestamp_column") {
        cfg.columns.timestamp_column = std::string(value);
    } else if (key == "count_column") {
        cfg.columns.count_column = std::string(value);
    } else if (key == "marker_column") {
        cfg.columns.marker_column = std::string(value);
    } else if (key == "delimiter") {
        if (value == "tab" || value == "\\t") {
            cfg.columns.delimiter = '\t';
        } else if (value.size() == 1) {
            cfg.columns.delimiter = value[0];
        } else {
            throw ParseError("delimiter must be a single character or 'tab'");
        }
    } else if (key == "epoch_seconds") {
        const int e = to_int(key, value);
        if (e != 30 && e != 60) throw ParseError("epoch_seconds must be 30 or 60");
        cfg.columns.epoch_seconds = e;
    } else if (key == "start_time") {
        cfg.columns.default_start = parse_timestamp(value);
    } else if (key == "min_wear_minutes") {
        cfg.screen.min_minutes = to_number(key, value);
    } else if (key == "max_zero_run_minutes") {
        cfg.screen.max_zero_run_minutes = to_number(key, value);
    } else if (key == "match_window_minutes") {
        cfg.match.window_minutes = to_number(key, value);
    } else if (key == "noon_cutoff_minutes") {
        cfg.match.noon_cutoff_minutes = to_number(key, value);
    } else {
        throw ParseError("unknown config key '" + std::string(key) + "'");
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return cfg;
}

json config_json(const RunConfig& cfg) {
    const auto& d = cfg.detection;
    json j;
    j["dichotomize_q"] = d.dichotomize_q;
    j["lambda"] = d.lambda;
    j["edge_guard_minutes"] = d.edge_guard_minutes;
    j["refinement_passes"] = d.refinement_passes;
    j["ch_delta_threshold"] = d.ch_delta_threshold;
    j["positivity_offset"] = d.positivity_offset;
    j["min_margin"] = d.min_margin;
    j["cosinor_init_mes"] = d.cosinor_init.mes;
    j["cosinor_init_amp"] = d.cosinor_init.amp;
    j["cosinor_init_phi"] = d.cosinor_init.phi;
    j["timestamp_column"] = cfg.columns.timestamp_column;
    j["count_column"] = cfg.columns.count_column;
    j["marker_column"] = cfg.columns.marker_column;
    j["delimiter"] = cfg.columns.delimiter == '\t' ? std::string("tab") : std::string(1, cfg.columns.delimiter);
    j["epoch_seconds"] = cfg.columns.epoch_seconds ? json(*cfg.columns.epoch_seconds) : json(nullptr);
    j["start_time"] = format_timestamp(cfg.columns.default_start);
    j["min_wear_minutes"] = cfg.screen.min_minutes;
    j["max_zero_run_minutes"] = cfg.screen.max_zero_run_minutes;
    j["match_window_minutes"] = cfg.match.window_minutes;
    j["noon_cutoff_minutes"] = cfg.match.noon_cutoff_minutes;
    return j;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
    RunConfig cfg = path.empty() ? RunConfig{} : parse_config(read_file(path));
    for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
    return cfg;
}

std::string_view to_string(SubjectStatus s) {
    switch (s) {
        case SubjectStatus::ok: return "ok";
        case SubjectStatus::screened_out: return "screened-out";
        case SubjectStatus::error_flagged: return "error-flagged";
        case SubjectStatus::failed: return "failed";
    }
    return "failed";
}

SubjectOutcome process_subject(const std::string& input, const RunConfig& cfg, const std::string& out_dir,
                               bool plots) {
    const auto t0 = std::chrono::steady_clock::now();
    SubjectOutcome outcome;
    outcome.input = input;
    outcome.subject_id = subject_id_of(input);
    const std::string base = (fs::path(out_dir) / outcome.subject_id).string();
    auto finish = [&](SubjectStatus status, int code, std::string message) {
        outcome.status = status;
        outcome.exit_code = code;
        outcome.message = std::move(message);
        outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return outcome;
    };

    json diag;
    diag["subject_id"] = outcome.subject_id;
    std::vector<std::string> warnings;

    EpochSeries series;
    try {
        series = parse_series(read_file(input), cfg.columns);
    } catch (const Error& e) {
        return finish(SubjectStatus::failed, kInputFailure, e.what());
    }

    try {
        diag["input"] = json{{"start_time", format_timestamp(series.start_time)},
                             {"epoch_seconds", series.epoch_seconds},
                             {"epochs", series.size()},
                             {"markers", series.markers.size()}};
        if (series.epoch_seconds == 30) series = aggregate(series, &warnings);

        const ScreenReport report = screen(series, cfg.screen);
        json sj{{"passed", report.passed},
                {"total_minutes", report.total_minutes},
                {"reason", std::string(to_string(report.reason))}};
        if (report.longest_wear) {
            const auto& w = *report.longest_wear;
            sj["longest_wear"] = json{{"start_index", w.start_index},
                                      {"end_index", w.end_index},
                                      {"length_minutes", w.length_minutes},
                                      {"start_time", format_timestamp(series.time_at(w.start_index))}};
        } else {
            sj["longest_wear"] = nullptr;
        }
        diag["screen"] = sj;
        diag["config"] = config_json(cfg);

        if (!report.passed) {
            diag["status"] = "screened-out";
            diag["warnings"] = warnings;
            write_file(base + ".diagnostics.json", write_json(diag));
            return finish(SubjectStatus::screened_out, kScreenedOut,
                          "screened out: " + std::string(to_string(report.reason)));
        }

        const EpochSeries wear = crop(series, *report.longest_wear);
        DetectionResult result;
        try {
            result = detect(wear, cfg.detection);
        } catch (const Degenerate& e) {
            diag["status"] = "failed";
            diag["error"] = e.what();
            diag["warnings"] = warnings;
            write_file(base + ".diagnostics.json", write_json(diag));
            return finish(SubjectStatus::failed, kDetectionFailed, e.what());
        }

        const auto& p = result.cosinor.params;
        diag["status"] = result.error_flag ? "error-flagged" : "ok";
        diag["cosinor"] = json{{"mes", p.mes},
                               {"amp", p.amp},
                               {"phi", p.phi},
                               {"acrophase_clock", format_clock(wear.start_time.minute_of_day() + p.phi)},
                               {"rss", result.cosinor.rss},
                               {"converged", result.cosinor.converged},
                               {"iterations", result.cosinor.iterations},
                               {"threshold", result.rough.threshold},
                               {"rough_boundaries", result.rough.boundaries.size()}};
        diag["ch_cosinor"] = number_json(result.ch_cosinor);
        diag["ch_refined"] = number_json(result.ch_refined);
        diag["ch_gain"] = number_json(result.ch_refined - result.ch_cosinor);
        diag["error_flag"] = result.error_flag;
        diag["events"] = result.events.size();
        diag["notes"] = result.notes;
        diag["warnings"] = warnings;

        std::ostringstream events_csv;
        write_events_csv(events_csv, outcome.subject_id, result.events);
        write_file(base + ".events.csv", events_csv.str());
        write_file(base + ".diagnostics.json", write_json(diag));
        if (plots) write_file(base + ".overlay.svg", svg_overlay(wear, result));

        outcome.events = result.events.size();
        if (result.error_flag)
            return finish(SubjectStatus::error_flagged, kErrorFlagged,
                          "CH gain " + format_double(result.ch_refined - result.ch_cosinor) + " below threshold");
        return finish(SubjectStatus::ok, kOk, "");
    } catch (const std::exception& e) {
        return finish(SubjectStatus::failed, kDetectionFailed, e.what());
    }
}

int cmd_detect(const DetectArgs& args) {
    RunConfig cfg;
    try {
        cfg = load_config(args.config, args.overrides);
    } catch (const Error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kUsage;
    }
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    const auto outcome = process_subject(args.input, cfg, args.out_dir, args.plots);
    if (outcome.status != SubjectStatus::ok) std::cerr << outcome.subject_id << ": " << outcome.message << "\n";
    return outcome.exit_code;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g{};
    std::vector<std::string> out;
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i)
            if (fs::is_regular_file(g.gl_pathv[i])) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_batch(const BatchArgs& args, RunManifest* manifest_out) {
    RunConfig cfg;
    try {
        cfg = load_config(args.config, args.overrides);
    } catch (const Error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kUsage;
    }
    RunManifest manifest;
    manifest.inputs = expand_glob(args.glob);
    manifest.config = config_json(cfg);
    if (manifest.inputs.empty()) {
        std::cerr << "no input files match '" << args.glob << "'\n";
        return kNoInput;
    }
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);

    const auto t0 = std::chrono::steady_clock::now();
    manifest.subjects.resize(manifest.inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < manifest.inputs.size(); i = next++)
            manifest.subjects[i] = process_subject(manifest.inputs[i], cfg, args.out_dir, args.plots);
    };
    const int threads = std::clamp(args.parallelism, 1, static_cast<int>(manifest.inputs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::map<std::string, std::size_t> tally{{"ok", 0}, {"screened-out", 0}, {"error-flagged", 0}, {"failed", 0}};
    json subjects = json::array();
    json timings = json::array();
    for (const auto& s : manifest.subjects) {
        ++tally[std::string(to_string(s.status))];
        subjects.push_back(json{{"input", s.input},
                                {"subject_id", s.subject_id},
                                {"status", std::string(to_string(s.status))},
                                {"exit_code", s.exit_code},
                                {"events", s.events},
                                {"message", s.message}});
        timings.push_back(json{{"subject_id", s.subject_id}, {"seconds", s.seconds}});
    }
    json summary{{"total", manifest.subjects.size()}};
    for (const char* k : {"ok", "screened-out", "error-flagged", "failed"}) summary[k] = tally[k];
    const json doc{{"config", manifest.config}, {"subjects", subjects}, {"summary", summary}};
    const json timing_doc{{"parallelism", threads}, {"wall_seconds", manifest.wall_seconds}, {"subjects", timings}};
    try {
        write_file((fs::path(args.out_dir) / "manifest.json").string(), write_json(doc));
        write_file((fs::path(args.out_dir) / "timings.json").string(), write_json(timing_doc));
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kInputFailure;
    }
    if (tally["failed"] > 0)
        std::cerr << "warning: " << tally["failed"] << " of " << manifest.subjects.size() << " subjects failed\n";
    if (manifest_out) *manifest_out = std::move(manifest);
    return kOk;
}

int cmd_validate(const ValidateArgs& args) {
    RunConfig cfg;
    try {
        cfg = load_config(args.config, args.overrides);
    } catch (const Error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kUsage;
    }
    std::vector<SubjectEvent> events;
    std::vector<MarkerRecord> markers;
    try {
        events = read_events_csv(read_file(args.events));
        markers = read_marker_csv(read_file(args.markers));
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kInputFailure;
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<ChangePointEvent>> by_subject;
    for (const auto& se : events) {
        if (!by_subject.count(se.subject_id)) order.push_back(se.subject_id);
        by_subject[se.subject_id].push_back(se.event);
    }
    std::vector<ValidationPair> pairs;
    for (const auto& subject : order) {
        std::vector<Timestamp> times;
        for (const auto& m : markers)
            if (!m.subject_id || *m.subject_id == subject) times.push_back(m.time);
        std::sort(times.begin(), times.end());
        auto& evs = by_subject[subject];
        std::stable_sort(evs.begin(), evs.end(), [](const auto& a, const auto& b) { return a.wall_time < b.wall_time; });
        auto matched = match_markers(evs, times, cfg.match, subject);
        pairs.insert(pairs.end(), matched.begin(), matched.end());
    }

    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    const fs::path out(args.out_dir);
    std::ostringstream pairs_csv;
    write_pairs_csv(pairs_csv, pairs);

    json doc;
    doc["pairs"] = pairs.size();
    doc["match_window_minutes"] = cfg.match.window_minutes;
    doc["noon_cutoff_minutes"] = cfg.match.noon_cutoff_minutes;
    int code = kOk;
    try {
        write_file((out / "pairs.csv").string(), pairs_csv.str());
        if (pairs.size() < 2) {
            doc["overall"] = nullptr;
            doc["error"] = "fewer than two matched pairs";
            write_file((out / "agreement.json").string(), write_json(doc));
            std::cerr << "validate: only " << pairs.size() << " matched pair(s)\n";
            return kTooFewPairs;
        }
        const AgreementReport report = bland_altman(pairs);
        doc["overall"] = stats_json(report.overall);
        doc["sot"] = report.sot ? stats_json(*report.sot) : json(nullptr);
        doc["wot"] = report.wot ? stats_json(*report.wot) : json(nullptr);
        json variance;
        for (auto label : {Transition::sleep_onset, Transition::wake_onset}) {
            const auto obs = observations_from_pairs(pairs, label);
            json v;
            try {
                const auto shares = variance_summary(obs);
                v = json{{"defined", shares.defined},
                         {"method_pct", shares.method},
                         {"subject_pct", shares.subject},
                         {"day_pct", shares.day},
                         {"residual_pct", shares.residual}};
            } catch (const InvalidInput& e) {
                v = json{{"defined", false}, {"reason", e.what()}};
            }
            variance[std::string(to_string(label))] = v;
        }
        doc["variance"] = variance;
        write_file((out / "agreement.json").string(), write_json(doc));
        if (args.plots) write_file((out / "bland_altman.svg").string(), svg_bland_altman(pairs, report));
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        code = kInputFailure;
    }
    return code;
}

int cmd_synth(const SynthArgs& args) {
    if (args.subjects < 1) {
        std::cerr << "synth: --subjects must be at least 1\n";
        return kUsage;
    }
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    for (int i = 0; i < args.subjects; ++i) {
        SynthSpec spec = args.spec;
        spec.seed = args.spec.seed + static_cast<std::uint64_t>(i);
        char name[32];
        std::snprintf(name, sizeof name, "_%03d", i);
        const std::string base = (fs::path(args.out_dir) / (args.prefix + name)).string();
        try {
            const SynthOutput out = generate(spec);
            std::ostringstream data, truth;
            write_series_csv(data, out.series);
            write_truth_csv(truth, out.series, out.truth);
            write_file(base + ".csv", data.str());
            write_file(base + ".truth.csv", truth.str());
        } catch (const InvalidInput& e) {
            std::cerr << "synth: " << e.what() << "\n";
            return kUsage;
        } catch (const Error& e) {
            std::cerr << "synth: " << e.what() << "\n";
            return kInputFailure;
        }
    }
    return kOk;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Sleep/wake onset detection from minute-level actigraphy"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string q, lambda, guard, passes, threshold, offset;
    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("--q", q, "dichotomization quantile (default 0.18)");
        sub->add_option("--lambda", lambda, "MIC location penalty weight (default 50)");
        sub->add_option("--edge-guard", guard, "minutes required before/after the outer boundaries (default 240)");
        sub->add_option("--passes", passes, "refinement passes (default 2)");
        sub->add_option("--ch-threshold", threshold, "minimum CH gain before flagging (default 100)");
        sub->add_option("--offset", offset, "positivity offset added to counts (default 0.1)");
    };
    auto collect = [&] {
        const std::pair<const char*, std::string*> keys[] = {{"dichotomize_q", &q},
                                                             {"lambda", &lambda},
                                                             {"edge_guard_minutes", &guard},
                                                             {"refinement_passes", &passes},
                                                             {"ch_delta_threshold", &threshold},
                                                             {"positivity_offset", &offset}};
        for (const auto& [k, v] : keys)
            if (!v->empty()) overrides.emplace_back(k, *v);
    };

    DetectArgs detect_args;
    auto* detect_cmd = app.add_subcommand("detect", "detect sleep/wake onsets in one file");
    detect_cmd->add_option("--input", detect_args.input, "actigraphy CSV")->required();
    detect_cmd->add_option("--config", detect_args.config, "key = value config file");
    detect_cmd->add_option("--out", detect_args.out_dir, "output directory")->required();
    detect_cmd->add_flag("!--no-plots", detect_args.plots, "skip SVG output");
    add_overrides(detect_cmd);

    BatchArgs batch_args;
    auto* batch_cmd = app.add_subcommand("batch", "run detection over every file matching a glob");
    batch_cmd->add_option("--glob", batch_args.glob, "input file pattern, e.g. 'data/*.csv'")->required();
    batch_cmd->add_option("--config", batch_args.config, "key = value config file");
    batch_cmd->add_option("--out", batch_args.out_dir, "output directory")->required();
    batch_cmd->add_option("--parallelism", batch_args.parallelism, "worker threads")->check(CLI::PositiveNumber);
    batch_cmd->add_flag("!--no-plots", batch_args.plots, "skip SVG output");
    add_overrides(batch_cmd);

    ValidateArgs validate_args;
    std::string window;
    auto* validate_cmd = app.add_subcommand("validate", "match detected events to event markers");
    validate_cmd->add_option("--events", validate_args.events, "events CSV from detect/batch")->required();
    validate_cmd->add_option("--markers", validate_args.markers, "marker, ground-truth or actigraphy CSV")->required();
    validate_cmd->add_option("--config", validate_args.config, "key = value config file");
    validate_cmd->add_option("--out", validate_args.out_dir, "output directory")->required();
    validate_cmd->add_option("--window", window, "matching window in minutes (default 180)");
    validate_cmd->add_flag("!--no-plots", validate_args.plots, "skip SVG output");

    SynthArgs synth_args;
    std::string sleep_clock = "23:00", wake_clock = "07:00", start = format_timestamp(kDefaultSynthStart);
    double shape = synth_args.spec.wake.shape;
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic actigraphy with ground truth");
    synth_cmd->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth_cmd->add_option("--seed", synth_args.spec.seed, "base seed; subject i uses seed + i");
    synth_cmd->add_option("--subjects", synth_args.subjects, "number of subjects");
    synth_cmd->add_option("--prefix", synth_args.prefix, "output file prefix");
    synth_cmd->add_option("--days", synth_args.spec.days, "recording length in days");
    synth_cmd->add_option("--start", start, "recording start, YYYY-MM-DDTHH:MM");
    synth_cmd->add_option("--epoch-seconds", synth_args.spec.epoch_seconds, "30 or 60");
    synth_cmd->add_option("--sleep-onset", sleep_clock, "scheduled sleep onset HH:MM");
    synth_cmd->add_option("--wake-onset", wake_clock, "scheduled wake onset HH:MM");
    synth_cmd->add_option("--jitter", synth_args.spec.onset_jitter_sd, "onset jitter SD, minutes");
    synth_cmd->add_option("--shape", shape, "Gamma shape shared by both regimes");
    synth_cmd->add_option("--wake-scale", synth_args.spec.wake.scale, "Gamma scale while awake");
    synth_cmd->add_option("--sleep-scale", synth_args.spec.sleep.scale, "Gamma scale while asleep");
    synth_cmd->add_option("--marker-noise", synth_args.spec.marker_noise_sd, "marker jitter SD, minutes");
    synth_cmd->add_option("--miss-prob", synth_args.spec.marker_miss_prob, "probability a marker is missing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    collect();
    if (*detect_cmd) {
        detect_args.overrides = overrides;
        return cmd_detect(detect_args);
    }
    if (*batch_cmd) {
        batch_args.overrides = overrides;
        return cmd_batch(batch_args);
    }
    if (*validate_cmd) {
        if (!window.empty()) validate_args.overrides.emplace_back("match_window_minutes", window);
        return cmd_validate(validate_args);
    }
    if (*synth_cmd) {
        try {
            auto clock = [](const std::string& hhmm) {
                return parse_timestamp("1970-01-01T" + hhmm).minute_of_day();
            };
            synth_args.spec.sleep_onset_clock = clock(sleep_clock);
            synth_args.spec.wake_onset_clock = clock(wake_clock);
            synth_args.spec.start = parse_timestamp(start);
        } catch (const ParseError& e) {
            std::cerr << "synth: " << e.what() << "\n";
            return kUsage;
        }
        synth_args.spec.wake.shape = shape;
        synth_args.spec.sleep.shape = shape;
        return cmd_synth(synth_args);
    }
    return kUsage;
}

}  // namespace circacp::cli
