#pragma once

// Output artifacts: delimited tables, one SVG bar chart per metric and a
// notes file. Output bytes depend only on the inputs.

#include <filesystem>
#include <span>
#include <string>

#include "spvote/experiment.hpp"
#include "spvote/metrics.hpp"

namespace spvote {

/// Bars (one per format) with 95% CI whiskers for one metric over domain "all".
std::string render_metric_svg(const std::string& metric, std::span<const SummaryRow> rows);

/// summary.csv, per_question.csv, tables/<metric>.csv, charts/<metric>.svg, notes.txt.
void write_metrics_report(const std::filesystem::path& dir, const MetricsReport& metrics);

/// Metrics report plus params.csv, calibration_<format|global>.csv,
/// issues.csv (if any) and failures.txt (if any).
void write_experiment_report(const std::filesystem::path& dir, const ExperimentResult& result);

}  // namespace spvote
