#pragma once

// Per-question and per-response error rows, and their summaries.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spvote/core.hpp"

namespace spvote {

struct RawMetric {
    std::string unit;  ///< "question" or "response"
    std::string format;
    std::string domain;
    std::string metric;
    std::string question_id;
    std::string voter_id;  ///< empty for question-level rows
    double value = 0.0;
};

struct SummaryRow {
    std::string format;
    std::string domain;  ///< a question domain or "all"
    std::string metric;
    double mean = 0.0;
    std::optional<double> half_width;  ///< 95% normal-approximation CI; needs n >= 2
    std::size_t n = 0;
};

struct MetricsReport {
    std::vector<RawMetric> raw;
    std::vector<SummaryRow> summary;
};

/// 1.96 * sample standard deviation / sqrt(n); nullopt for n < 2.
std::optional<double> ci95_half_width(std::span<const double> values);

/// Groups rows by (format, domain, metric), adding domain "all" per
/// (format, metric). Output sorted by format, metric, then domain with "all" first.
std::vector<SummaryRow> summarize(std::span<const RawMetric> raw);

double vote_top_error(const VoteReport& vote, const Ranking& truth);
std::optional<double> vote_kt(const VoteReport& vote, const Ranking& truth);

/// Error of voter `index`'s prediction against the realized statistic of the
/// other voters' votes: their most common top choice (single-alternative
/// predictions, top-vote rank predictions) or their most common ranking
/// (rank-vote rank predictions). Ties in the target are averaged exactly.
struct PredictionErrors {
    std::optional<double> top_error;
    std::optional<double> kt;
};
PredictionErrors prediction_errors(const Election& election, std::size_t index);

void write_raw_metrics(std::ostream& out, std::span<const RawMetric> raw);
std::vector<RawMetric> parse_raw_metrics(std::istream& in);
void write_summary(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace spvote
