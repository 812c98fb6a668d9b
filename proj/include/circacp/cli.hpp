#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "circacp/detector.hpp"
#include "circacp/ingest.hpp"
#include "circacp/synth.hpp"
#include "circacp/validate.hpp"

namespace circacp::cli {

/// Process exit codes. Every failure path maps to a nonzero code.
enum ExitCode : int {
    kOk = 0,
    kInputFailure = 1,     ///< unreadable or unparsable input
    kScreenedOut = 2,      ///< recording too short or no long enough wear period
    kErrorFlagged = 3,     ///< detection ran but failed the CH improvement check; artifacts written
    kDetectionFailed = 4,  ///< no usable rhythm or no complete cycle
    kTooFewPairs = 5,      ///< validate matched fewer than two event/marker pairs
    kUsage = 64,           ///< bad command line or config file
    kNoInput = 66,         ///< batch glob matched no file
};

struct RunConfig {
    ColumnMapping columns;
    ScreenConfig screen;
    DetectionConfig detection;
    MatchOptions match;
};

/// Sets one flat config key. Throws ParseError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment, blank lines are ignored.
RunConfig parse_config(std::string_view text);

/// Every key with its effective value, in a fixed order.
nlohmann::ordered_json config_json(const RunConfig& cfg);

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Defaults, then the config file (if any), then command-line overrides.
RunConfig load_config(const std::string& path, const Overrides& overrides);

enum class SubjectStatus { ok, screened_out, error_flagged, failed };
std::string_view to_string(SubjectStatus s);

struct SubjectOutcome {
    std::string input;
    std::string subject_id;
    SubjectStatus status = SubjectStatus::failed;
    int exit_code = kInputFailure;
    std::string message;
    std::size_t events = 0;
    double seconds = 0.0;
};

/// Parse, aggregate to 60 s if needed, screen, crop to the longest wear period,
/// detect, and write <id>.events.csv, <id>.diagnostics.json and (optionally)
/// <id>.overlay.svg into out_dir. Never throws for per-subject problems.
SubjectOutcome process_subject(const std::string& input, const RunConfig& cfg, const std::string& out_dir,
                               bool plots);

struct DetectArgs {
    std::string input;
    std::string config;
    std::string out_dir;
    bool plots = true;
    Overrides overrides;
};
int cmd_detect(const DetectArgs& args);

struct BatchArgs {
    std::string glob;
    std::string config;
    std::string out_dir;
    int parallelism = 1;
    bool plots = true;
    Overrides overrides;
};

struct RunManifest {
    std::vector<std::string> inputs;
    nlohmann::ordered_json config;
    std::vector<SubjectOutcome> subjects;  ///< same order as inputs
    double wall_seconds = 0.0;
};

/// Runs every matching file through process_subject on up to `parallelism`
/// threads. Writes manifest.json (statuses, deterministic) and timings.json.
/// Subject failures are recorded and do not stop the batch.
int cmd_batch(const BatchArgs& args, RunManifest* manifest = nullptr);

struct ValidateArgs {
    std::string events;
    std::string markers;
    std::string config;
    std::string out_dir;
    bool plots = true;
    Overrides overrides;
};
/// Writes pairs.csv, agreement.json and bland_altman.svg.
int cmd_validate(const ValidateArgs& args);

struct SynthArgs {
    std::string out_dir;
    std::string prefix = "synth";
    int subjects = 1;
    SynthSpec spec;
};
/// Writes <prefix>_NNN.csv and <prefix>_NNN.truth.csv; subject i uses seed + i.
int cmd_synth(const SynthArgs& args);

std::vector<std::string> expand_glob(const std::string& pattern);

int run(int argc, const char* const* argv);

}  // namespace circacp::cli
