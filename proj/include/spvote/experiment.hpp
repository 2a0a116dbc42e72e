#pragma once

// Experiment orchestration: load or simulate elections, calibrate (alpha,
// beta) per format on a training split, aggregate the test split, and score
// SP output, raw votes, raw predictions and the baseline rules.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spvote/bayes.hpp"
#include "spvote/calib.hpp"
#include "spvote/core.hpp"
#include "spvote/io.hpp"
#include "spvote/metrics.hpp"
#include "spvote/sp_aggregate.hpp"

namespace spvote {

/// Synthetic world and sample sizes.
struct WorldSpec {
    std::size_t m = 4;
    double phi = 1.0;
    /// "uniform" or "mallows" (centered at the identity with prior_phi).
    std::string prior = "uniform";
    double prior_phi = 0.5;
    double prediction_noise = 0.0;
    std::size_t questions = 100;
    std::size_t voters = 20;
    std::size_t domains = 1;

    WorldModel build() const;
};

/// All six formats in canonical order.
std::vector<ElicitationFormat> default_formats();

enum class MetricMode { Exact, Sampled };
enum class BaselineMode { Pooled, PerFormat, Off };

struct ExperimentConfig {
    std::optional<std::filesystem::path> responses_path;
    std::optional<std::filesystem::path> questions_path;
    std::optional<WorldSpec> world;

    std::vector<ElicitationFormat> formats = default_formats();
    bool calibrate = true;
    bool global_calibration = false;
    GridSpec grid;
    Loss loss = Loss::MseKt;
    ExtractionParams params;  ///< used when calibrate is false
    std::size_t train_per_domain = 5;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> out_dir;
    MetricMode metric_mode = MetricMode::Exact;
    int samples = 100;
    SpMode sp_mode = SpMode::PerVoter;
    BaselineMode baselines = BaselineMode::Pooled;
    bool strict = false;  ///< lenient ingest skips and records bad rows

    /// Exactly one of (responses file) and (world) must be set.
    void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Relative paths resolve
/// against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_config_entry(ExperimentConfig& config, const std::string& key, const std::string& value,
                        const std::filesystem::path& base_dir = {});

struct ExperimentData {
    std::vector<Question> questions;
    std::vector<Election> elections;  ///< single-format slices
    std::vector<IngestIssue> issues;
};

/// Questions q00001, ... with truths drawn from the prior; every format's
/// election for a question shares the voters' observations.
ExperimentData simulate_data(const WorldSpec& spec, const std::vector<ElicitationFormat>& formats,
                             std::uint64_t seed);
ExperimentData load_data(const ExperimentConfig& config);

struct ExperimentResult {
    MetricsReport metrics;
    std::vector<CalibResult> calibrations;
    std::map<ElicitationFormat, ExtractionParams> params;
    TrainTestSplit split;
    std::vector<IngestIssue> issues;
    /// Slices that could not be processed; the rest of the run continues.
    std::vector<std::string> failures;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentData& data);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace spvote
