// spvote: command-line front end.
//
// Exit codes: 0 success, 2 invalid input or configuration, 1 anything else.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spvote/baselines.hpp"
#include "spvote/calib.hpp"
#include "spvote/experiment.hpp"
#include "spvote/fixtures.hpp"
#include "spvote/io.hpp"
#include "spvote/report.hpp"
#include "spvote/sp_aggregate.hpp"
#include "spvote/tournament.hpp"

namespace fs = std::filesystem;
using namespace spvote;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
    bool strict = false;
};

struct DataArgs {
    std::string responses;
    std::string questions;
    std::vector<std::string> sets;  // key=value config overrides
};

ExperimentConfig build_config(const Globals& g, const DataArgs& d) {
    ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
    for (const auto& s : d.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + s + "'");
        apply_config_entry(c, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!d.responses.empty()) {
        c.responses_path = d.responses;
        c.world.reset();
    }
    if (!d.questions.empty()) c.questions_path = d.questions;
    if (g.seed) c.seed = *g.seed;
    if (!g.out.empty()) c.out_dir = g.out;
    if (g.strict) c.strict = true;
    return c;
}

fs::path out_dir(const ExperimentConfig& c) { return c.out_dir.value_or("spvote-out"); }

void ensure(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string());
}

void report_issues(const std::vector<IngestIssue>& issues) {
    for (const auto& i : issues) std::cerr << "skipped line " << i.line << ": " << i.message << '\n';
}

int cmd_simulate(const Globals& g, const DataArgs& d) {
    auto c = build_config(g, d);
    if (!c.world) c.world.emplace();
    c.responses_path.reset();
    c.questions_path.reset();
    const auto data = simulate_data(*c.world, c.formats, c.seed);
    const auto dir = out_dir(c);
    ensure(dir);
    std::ostringstream q;
    write_questions(q, data.questions);
    write_text_file(dir / "questions.csv", q.str());
    std::ostringstream r;
    write_responses(r, data.elections);
    write_text_file(dir / "responses.csv", r.str());
    std::cout << fmt::format("wrote {} questions, {} elections to {}\n", data.questions.size(),
                             data.elections.size(), dir.string());
    return 0;
}

int cmd_aggregate(const Globals& g, const DataArgs& d) {
    auto c = build_config(g, d);
    c.calibrate = false;
    c.validate();
    const auto data = load_data(c);
    report_issues(data.issues);
    const auto dir = out_dir(c);
    ensure(dir);

    std::string pairs = "question_id,format,alt_a,alt_b,winner,v_ab,v_ba,n_ab,n_ba,tie\n";
    std::string tops = "question_id,format,winners,ranking\n";
    for (const auto& e : data.elections) {
        const auto& q = e.question;
        const auto seed = election_seed(c.seed, e);
        const auto fmt_token = to_token(e.format());
        if (e.format().has_prediction()) {
            for (const auto& p : pair_decisions(e, c.params, seed, c.sp_mode)) {
                pairs += fmt::format("{},{},{},{},{},{:.12g},{:.12g},{},{},{}\n", csv_field(q.question_id),
                                     fmt_token, csv_field(q.alternatives[p.pair.a].label),
                                     csv_field(q.alternatives[p.pair.b].label),
                                     csv_field(q.alternatives[p.a_wins ? p.pair.a : p.pair.b].label),
                                     p.v_ab, p.v_ba, p.n_ab, p.n_ba,
                                     p.outcome == PairOutcome::Tie ? "yes" : "no");
            }
        }
        const auto t = aggregate(e, c.params, seed, c.sp_mode);
        std::string winners;
        for (const AltId w : select_top(t).winners) {
            winners += (winners.empty() ? "" : "|") + q.alternatives[w].label;
        }
        const auto ranking = induced_ranking(t);
        tops += fmt::format("{},{},{},{}\n", csv_field(q.question_id), fmt_token, csv_field(winners),
                            ranking ? csv_field(format_ranking(*ranking, q)) : std::string());
    }
    write_text_file(dir / "pair_decisions.csv", pairs);
    write_text_file(dir / "aggregate.csv", tops);
    std::cout << fmt::format("aggregated {} elections into {}\n", data.elections.size(), dir.string());
    return 0;
}

int cmd_train(const Globals& g, const DataArgs& d) {
    auto c = build_config(g, d);
    c.calibrate = true;
    c.validate();
    const auto data = load_data(c);
    report_issues(data.issues);
    std::vector<Election> labeled;
    for (const auto& e : data.elections) {
        if (e.question.ground_truth) labeled.push_back(e);
    }
    std::vector<CalibResult> results;
    if (c.global_calibration) {
        results.push_back(grid_search_global(labeled, c.grid, c.loss, c.seed, c.sp_mode));
    } else {
        for (const auto f : c.formats) {
            if (f.has_prediction()) results.push_back(grid_search(labeled, f, c.grid, c.loss, c.seed, c.sp_mode));
        }
    }
    const auto dir = out_dir(c);
    ensure(dir);
    std::string params = "format,alpha,beta,loss\n";
    for (const auto& r : results) {
        const std::string name = r.format ? to_token(*r.format) : "global";
        params += fmt::format("{},{:.6f},{:.6f},{:.9f}\n", name, r.best.alpha, r.best.beta, r.best_loss);
        std::string surface = "alpha,beta,loss\n";
        for (const auto& [cell, loss] : r.loss_surface) {
            surface += fmt::format("{:.6f},{:.6f},{:.9f}\n", cell.first, cell.second, loss);
        }
        write_text_file(dir / ("calibration_" + name + ".csv"), surface);
    }
    write_text_file(dir / "params.csv", params);
    std::cout << params;
    return 0;
}

int cmd_baselines(const Globals& g, const DataArgs& d) {
    auto c = build_config(g, d);
    c.calibrate = false;
    c.validate();
    const auto data = load_data(c);
    report_issues(data.issues);
    const auto dir = out_dir(c);
    ensure(dir);
    std::string table = "question_id,format,rule,alternative,win_probability\n";
    std::string errors = "question_id,format,rule,top_error,kt\n";
    for (const auto& e : data.elections) {
        if (e.format().vote != VoteKind::Rank) continue;
        const auto& q = e.question;
        const Profile profile = profile_from(std::span<const Election>(&e, 1));
        const auto token = to_token(e.format());
        for (const Rule rule : all_rules()) {
            const auto dist = winner_distribution(rule, profile);
            for (std::size_t a = 0; a < dist.size(); ++a) {
                table += fmt::format("{},{},{},{},{:.9f}\n", csv_field(q.question_id), token,
                                     rule_name(rule), csv_field(q.alternatives[a].label), dist[a]);
            }
            if (q.ground_truth) {
                errors += fmt::format("{},{},{},{:.9f},{:.9f}\n", csv_field(q.question_id), token,
                                      rule_name(rule), baseline_top_error(rule, profile, *q.ground_truth),
                                      baseline_kt(rule, profile, *q.ground_truth));
            }
        }
    }
    write_text_file(dir / "baseline_winners.csv", table);
    write_text_file(dir / "baseline_errors.csv", errors);
    std::cout << "wrote baseline tables to " << dir.string() << '\n';
    return 0;
}

int cmd_evaluate(const Globals& g, const DataArgs& d) {
    const auto c = build_config(g, d);
    const auto result = run_experiment(c);
    const auto dir = out_dir(c);
    write_experiment_report(dir, result);
    report_issues(result.issues);
    for (const auto& row : result.metrics.summary) {
        if (row.domain != "all") continue;
        std::cout << fmt::format("{:<12} {:<34} {:>9.4f} {:>9} n={}\n", row.format, row.metric, row.mean,
                                 row.half_width ? fmt::format("+-{:.4f}", *row.half_width) : "", row.n);
    }
    if (!result.failures.empty()) {
        for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
        std::cerr << "partial results written; see failures.txt\n";
        return 2;
    }
    return 0;
}

struct FixtureArgs {
    std::string list;
    std::size_t gap = 6;
    std::size_t count = 20;
    std::size_t per_question = 4;
    std::string domain = "fixture";
};

int cmd_fixtures(const Globals& g, const FixtureArgs& f) {
    std::ifstream in(f.list);
    if (!in) throw InputError("cannot open list file " + f.list);
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) labels.push_back(line);
    }
    const auto questions = generate_fixture_questions(labels, f.gap, f.count, f.domain, f.per_question);
    const fs::path dir = g.out.empty() ? fs::path("spvote-out") : fs::path(g.out);
    ensure(dir);
    std::ostringstream out;
    write_questions(out, questions);
    write_text_file(dir / "questions.csv", out.str());
    std::cout << fmt::format("wrote {} questions to {}\n", questions.size(), (dir / "questions.csv").string());
    return 0;
}

int cmd_report(const Globals& g, const std::string& metrics_path) {
    std::ifstream in(metrics_path);
    if (!in) throw InputError("cannot open metrics file " + metrics_path);
    MetricsReport report;
    report.raw = parse_raw_metrics(in);
    report.summary = summarize(report.raw);
    const fs::path dir = g.out.empty() ? fs::path("spvote-out") : fs::path(g.out);
    write_metrics_report(dir, report);
    std::cout << fmt::format("wrote {} summary rows to {}\n", report.summary.size(), dir.string());
    return 0;
}

void add_data_options(CLI::App* sub, DataArgs& d, bool with_sets = true) {
    sub->add_option("--responses", d.responses, "responses table");
    sub->add_option("--questions", d.questions, "questions table");
    if (with_sets) sub->add_option("--set", d.sets, "config override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pairwise surprisingly-popular voting: simulate, aggregate, calibrate and evaluate."};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--config", g.config, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    app.add_flag("--strict", g.strict, "abort on the first malformed input row");

    DataArgs d;
    auto* simulate = app.add_subcommand("simulate", "generate questions and responses from a world");
    simulate->add_option("--set", d.sets, "config override key=value (repeatable)");
    auto* aggregate_cmd = app.add_subcommand("aggregate", "run SP on every election");
    add_data_options(aggregate_cmd, d);
    auto* train = app.add_subcommand("train", "grid-search alpha and beta on labeled elections");
    add_data_options(train, d);
    auto* baselines = app.add_subcommand("baselines", "run the voting rules on rank-vote elections");
    add_data_options(baselines, d);
    auto* evaluate = app.add_subcommand("evaluate", "full experiment with report");
    add_data_options(evaluate, d);

    FixtureArgs f;
    auto* fixtures = app.add_subcommand("fixtures", "questions from a ranked list of labels");
    fixtures->add_option("--list", f.list, "one label per line, best first")->required();
    fixtures->add_option("--gap", f.gap, "rank distance between alternatives");
    fixtures->add_option("--count", f.count, "number of questions");
    fixtures->add_option("--per-question", f.per_question, "alternatives per question");
    fixtures->add_option("--domain", f.domain, "domain column value");

    std::string metrics_path;
    auto* report = app.add_subcommand("report", "summaries and charts from a per_question.csv");
    report->add_option("--metrics", metrics_path, "raw metrics table")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) return cmd_simulate(g, d);
        if (*aggregate_cmd) return cmd_aggregate(g, d);
        if (*train) return cmd_train(g, d);
        if (*baselines) return cmd_baselines(g, d);
        if (*evaluate) return cmd_evaluate(g, d);
        if (*fixtures) return cmd_fixtures(g, f);
        if (*report) return cmd_report(g, metrics_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
