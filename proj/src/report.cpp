#include "spvote/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "spvote/io.hpp"

namespace spvote {

namespace {

constexpr std::string_view kNotes =
    "Confidence intervals: 95% normal approximation, 1.96 * sample sd / sqrt(n), "
    "reported only for n >= 2.\n"
    "Units: SP and baseline metrics average over questions (one row per question and format); "
    "vote and prediction metrics average over individual responses.\n"
    "Response-level intervals treat responses as independent. Respondents who answered several "
    "questions are not clustered, so those intervals are optimistic.\n"
    "Prediction targets: the other respondents' most common top choice, or their most common "
    "ranking for rank-rank; ties in the target are averaged exactly.\n"
    "rank-pooled: baseline rules run on all rank votes of a question across the rank formats.\n"
    "Simulated data: question ids q00001.., alternatives labeled A, B, C, ... and domain "
    "'synthetic'.\n";

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw InputError("cannot create output directory " + dir.string());
    }
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// File-name safe: letters, digits, '-', '_'.
std::string slug(std::string_view s) {
    std::string out;
    for (const char c : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

// A round axis maximum: 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
    if (v <= 0.0) return 1.0;
    const double p = std::pow(10.0, std::floor(std::log10(v)));
    for (const double k : {1.0, 2.0, 5.0, 10.0}) {
        if (k * p >= v - 1e-12) return k * p;
    }
    return 10.0 * p;
}

}  // namespace

std::string render_metric_svg(const std::string& metric, std::span<const SummaryRow> rows) {
    std::vector<SummaryRow> bars;
    for (const auto& r : rows) {
        if (r.metric == metric && r.domain == "all") bars.push_back(r);
    }
    const double width = 120.0 + 90.0 * static_cast<double>(std::max<std::size_t>(bars.size(), 1));
    const double height = 320.0;
    const double left = 60.0;
    const double top = 40.0;
    const double plot_h = 200.0;
    const double base = top + plot_h;

    double ymax = 0.0;
    for (const auto& b : bars) ymax = std::max(ymax, b.mean + b.half_width.value_or(0.0));
    ymax = nice_ceiling(ymax);
    const auto y = [&](double v) { return base - plot_h * v / ymax; };

    std::string s;
    s += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height, width, height);
    s += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
    s += fmt::format("<text x=\"{:.1f}\" y=\"22\" font-size=\"15\">{}</text>\n", left, xml_escape(metric));
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4.0;
        s += fmt::format(
            "<line x1=\"{:.1f}\" y1=\"{:.2f}\" x2=\"{:.1f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left,
            y(v), width - 20.0, y(v));
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                         left - 6.0, y(v) + 4.0, v);
    }
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        const double cx = left + 50.0 + 90.0 * static_cast<double>(i);
        s += fmt::format(
            "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"50\" height=\"{:.2f}\" fill=\"#4c78a8\"/>\n",
            cx - 25.0, y(b.mean), base - y(b.mean));
        if (b.half_width) {
            const double lo = y(std::max(0.0, b.mean - *b.half_width));
            const double hi = y(b.mean + *b.half_width);
            s += fmt::format(
                "<path d=\"M{:.2f} {:.2f}V{:.2f}M{:.2f} {:.2f}h14M{:.2f} {:.2f}h14\" "
                "stroke=\"black\" fill=\"none\"/>\n",
                cx, lo, hi, cx - 7.0, lo, cx - 7.0, hi);
        }
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", cx,
                         base + 18.0, xml_escape(b.format));
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" fill=\"#555555\">{:.3f} (n={})</text>\n",
                         cx, base + 34.0, b.mean, b.n);
    }
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                     left, base, width - 20.0, base);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"#555555\">whiskers: 95% normal-approximation CI</text>\n",
                     left, height - 12.0);
    s += "</svg>\n";
    return s;
}

void write_metrics_report(const std::filesystem::path& dir, const MetricsReport& metrics) {
    ensure_dir(dir);
    std::ostringstream summary;
    write_summary(summary, metrics.summary);
    write_text_file(dir / "summary.csv", summary.str());

    std::ostringstream raw;
    write_raw_metrics(raw, metrics.raw);
    write_text_file(dir / "per_question.csv", raw.str());

    std::set<std::string> names;
    for (const auto& r : metrics.summary) names.insert(r.metric);
    if (!names.empty()) {
        ensure_dir(dir / "tables");
        ensure_dir(dir / "charts");
    }
    for (const auto& name : names) {
        std::vector<SummaryRow> rows;
        std::copy_if(metrics.summary.begin(), metrics.summary.end(), std::back_inserter(rows),
                     [&](const SummaryRow& r) { return r.metric == name; });
        std::ostringstream table;
        write_summary(table, rows);
        write_text_file(dir / "tables" / (slug(name) + ".csv"), table.str());
        write_text_file(dir / "charts" / (slug(name) + ".svg"), render_metric_svg(name, rows));
    }
    write_text_file(dir / "notes.txt", kNotes);
}

void write_experiment_report(const std::filesystem::path& dir, const ExperimentResult& result) {
    write_metrics_report(dir, result.metrics);

    std::string params = "format,alpha,beta,calibrated\n";
    for (const auto& [f, p] : result.params) {
        const bool calibrated = std::any_of(
            result.calibrations.begin(), result.calibrations.end(),
            [&](const CalibResult& c) { return !c.format || *c.format == f; });
        params += fmt::format("{},{:.6f},{:.6f},{}\n", to_token(f), p.alpha, p.beta,
                              calibrated ? "yes" : "no");
    }
    write_text_file(dir / "params.csv", params);

    for (const auto& c : result.calibrations) {
        std::string table = "alpha,beta,loss\n";
        for (const auto& [cell, loss] : c.loss_surface) {
            table += fmt::format("{:.6f},{:.6f},{:.9f}\n", cell.first, cell.second, loss);
        }
        const std::string name = c.format ? to_token(*c.format) : "global";
        write_text_file(dir / ("calibration_" + name + ".csv"), table);
    }

    std::string split = "question_id,role\n";
    for (const auto& q : result.split.train) split += csv_field(q) + ",train\n";
    for (const auto& q : result.split.test) split += csv_field(q) + ",test\n";
    write_text_file(dir / "split.csv", split);

    if (!result.issues.empty()) {
        std::string issues = "line,message\n";
        for (const auto& i : result.issues) issues += fmt::format("{},{}\n", i.line, csv_field(i.message));
        write_text_file(dir / "issues.csv", issues);
    }
    if (!result.failures.empty()) {
        std::string failures;
        for (const auto& f : result.failures) failures += f + '\n';
        write_text_file(dir / "failures.txt", failures);
    }
}

}  // namespace spvote
