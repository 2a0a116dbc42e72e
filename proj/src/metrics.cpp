#include "spvote/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "spvote/io.hpp"
#include "spvote/tournament.hpp"

namespace spvote {

namespace {

constexpr std::string_view kRawHeader = "unit,format,domain,metric,question_id,voter_id,value";

AltId top_of(const VoteReport& v) {
    if (const auto* t = std::get_if<TopChoice>(&v)) return t->alt;
    return std::get<Ranking>(v).top();
}

double parse_double(const std::string& text, std::size_t line) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ValidationError(line, "bad number '" + text + "'");
    return value;
}

}  // namespace

std::optional<double> ci95_half_width(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return std::nullopt;
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

std::vector<SummaryRow> summarize(std::span<const RawMetric> raw) {
    using Key = std::tuple<std::string, std::string, std::string>;  // format, metric, domain
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : raw) {
        groups[{r.format, r.metric, "all"}].push_back(r.value);
        if (r.domain != "all") groups[{r.format, r.metric, r.domain}].push_back(r.value);
    }
    std::vector<SummaryRow> rows;
    for (const auto& [key, values] : groups) {
        const auto& [format, metric, domain] = key;
        double mean = 0.0;
        for (const double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        rows.push_back({format, domain, metric, mean, ci95_half_width(values), values.size()});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& x, const SummaryRow& y) {
        const auto rank = [](const SummaryRow& r) {
            return std::make_tuple(r.format, r.metric, r.domain != "all", r.domain);
        };
        return rank(x) < rank(y);
    });
    return rows;
}

double vote_top_error(const VoteReport& vote, const Ranking& truth) {
    return top_of(vote) == truth.top() ? 0.0 : 1.0;
}

std::optional<double> vote_kt(const VoteReport& vote, const Ranking& truth) {
    if (const auto* r = std::get_if<Ranking>(&vote)) return static_cast<double>(ranking_kt(*r, truth));
    return std::nullopt;
}

PredictionErrors prediction_errors(const Election& election, std::size_t index) {
    const auto& responses = election.responses;
    const auto& self = responses.at(index);
    PredictionErrors out;
    if (!self.format.has_prediction() || responses.size() < 2) return out;
    const std::size_t m = election.question.m();

    const bool modal_ranking_target =
        self.format.vote == VoteKind::Rank && self.format.prediction == PredictionKind::Rank;

    if (!modal_ranking_target) {
        std::vector<long long> tops(m, 0);
        for (std::size_t j = 0; j < responses.size(); ++j) {
            if (j != index) ++tops[top_of(responses[j].vote)];
        }
        const long long best = *std::max_element(tops.begin(), tops.end());
        const auto winners = std::count(tops.begin(), tops.end(), best);
        const AltId predicted_top = std::holds_alternative<TopChoice>(self.prediction)
                                        ? std::get<TopChoice>(self.prediction).alt
                                        : std::get<Ranking>(self.prediction).top();
        out.top_error = tops[predicted_top] == best ? 1.0 - 1.0 / static_cast<double>(winners) : 1.0;

        if (const auto* pred = std::get_if<Ranking>(&self.prediction)) {
            double kt = 0.0;
            for (const auto& p : pairs_of(m)) {
                if (tops[p.a] == tops[p.b]) {
                    kt += 0.5;
                } else if (pred->prefers(p.a, p.b) != (tops[p.a] > tops[p.b])) {
                    kt += 1.0;
                }
            }
            out.kt = kt;
        }
        return out;
    }

    std::map<Ranking, long long> counts;
    for (std::size_t j = 0; j < responses.size(); ++j) {
        if (j != index) ++counts[std::get<Ranking>(responses[j].vote)];
    }
    long long best = 0;
    for (const auto& [r, c] : counts) best = std::max(best, c);
    const auto& pred = std::get<Ranking>(self.prediction);
    double top_err = 0.0;
    double kt = 0.0;
    double modes = 0.0;
    for (const auto& [r, c] : counts) {
        if (c != best) continue;
        modes += 1.0;
        top_err += r.top() == pred.top() ? 0.0 : 1.0;
        kt += ranking_kt(pred, r);
    }
    out.top_error = top_err / modes;
    out.kt = kt / modes;
    return out;
}

void write_raw_metrics(std::ostream& out, std::span<const RawMetric> raw) {
    out << kRawHeader << '\n';
    for (const auto& r : raw) {
        out << csv_field(r.unit) << ',' << csv_field(r.format) << ',' << csv_field(r.domain) << ','
            << csv_field(r.metric) << ',' << csv_field(r.question_id) << ',' << csv_field(r.voter_id)
            << ',' << fmt::format("{}", r.value) << '\n';
    }
}

std::vector<RawMetric> parse_raw_metrics(std::istream& in) {
    std::string line;
    std::size_t number = 0;
    std::vector<RawMetric> out;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != kRawHeader) throw ValidationError(number, "expected header " + std::string(kRawHeader));
            header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw ValidationError(number, "expected 7 fields");
        out.push_back({f[0], f[1], f[2], f[3], f[4], f[5], parse_double(f[6], number)});
    }
    if (!header) throw ValidationError(1, "raw metrics file is empty");
    return out;
}

void write_summary(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "format,domain,metric,mean,ci95_half_width,n\n";
    for (const auto& r : rows) {
        out << csv_field(r.format) << ',' << csv_field(r.domain) << ',' << csv_field(r.metric) << ','
            << fmt::format("{:.6f}", r.mean) << ','
            << (r.half_width ? fmt::format("{:.6f}", *r.half_width) : std::string()) << ',' << r.n
            << '\n';
    }
}

}  // namespace spvote
