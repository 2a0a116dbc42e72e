#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "spvote/experiment.hpp"
#include "spvote/report.hpp"

using namespace spvote;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "/base");
}

ExperimentConfig small_world_config() {
    return parse(
        "world.m = 3\n"
        "world.phi = 0.5\n"
        "world.questions = 16\n"
        "world.voters = 8\n"
        "world.domains = 2\n"
        "world.prediction_noise = 0.1\n"
        "train_per_domain = 3\n"
        "grid.alpha_min = 0.6\ngrid.alpha_max = 0.9\ngrid.alpha_step = 0.1\n"
        "grid.beta_min = 0.1\ngrid.beta_max = 0.4\ngrid.beta_step = 0.1\n"
        "seed = 12\n");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Relative path -> contents for every file under `dir`.
std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Config, ParsesKeys) {
    const auto c = parse(
        "# comment\n"
        "responses = data/r.csv   # trailing comment\n"
        "questions = /abs/q.csv\n"
        "formats = top-none, rank-rank\n"
        "calibrate = false\n"
        "alpha = 0.8\nbeta = 0.2\n"
        "loss = mse_top\n"
        "metric_mode = sampled\nsamples = 50\n"
        "sp_mode = signal-sum\n"
        "baselines = per-format\n"
        "calibration = global\n"
        "strict = true\n"
        "out = results\n");
    EXPECT_EQ(*c.responses_path, fs::path("/base/data/r.csv"));
    EXPECT_EQ(*c.questions_path, fs::path("/abs/q.csv"));
    EXPECT_EQ(c.formats, (std::vector<ElicitationFormat>{parse_format("top-none"), parse_format("rank-rank")}));
    EXPECT_FALSE(c.calibrate);
    EXPECT_EQ(c.params, (ExtractionParams{0.8, 0.2}));
    EXPECT_EQ(c.loss, Loss::MseTop);
    EXPECT_EQ(c.metric_mode, MetricMode::Sampled);
    EXPECT_EQ(c.samples, 50);
    EXPECT_EQ(c.sp_mode, SpMode::SignalSum);
    EXPECT_EQ(c.baselines, BaselineMode::PerFormat);
    EXPECT_TRUE(c.global_calibration);
    EXPECT_TRUE(c.strict);
    EXPECT_EQ(*c.out_dir, fs::path("/base/results"));
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, Defaults) {
    const auto c = parse("");
    EXPECT_EQ(c.formats.size(), 6u);
    EXPECT_TRUE(c.calibrate);
    EXPECT_EQ(c.grid.alphas().size(), 17u);
    EXPECT_EQ(c.train_per_domain, 5u);
    EXPECT_FALSE(c.strict);
    // Neither data source.
    EXPECT_THROW(c.validate(), InputError);
}

TEST(Config, Errors) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse(text);
        } catch (const ValidationError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("seed = 1\nbogus = 2\n"), 2u);
    EXPECT_EQ(line_of("seed = x\n"), 1u);
    EXPECT_EQ(line_of("\n\nno equals sign\n"), 3u);
    EXPECT_EQ(line_of("formats = top-all\n"), 1u);
    EXPECT_EQ(line_of("loss = l1\n"), 1u);
    EXPECT_EQ(line_of("calibrate = maybe\n"), 1u);
    EXPECT_EQ(line_of("world.prior = peaked\n"), 1u);

    auto both = parse("responses = r.csv\nworld.m = 3\n");
    EXPECT_THROW(both.validate(), InputError);
    auto bad_params = parse("world.m = 3\ncalibrate = false\nalpha = 0.4\n");
    EXPECT_THROW(bad_params.validate(), InputError);
    auto bad_grid = parse("world.m = 3\ngrid.alpha_max = 1.0\n");
    EXPECT_THROW(bad_grid.validate(), InputError);
}

TEST(Simulate, SharedSignalsAcrossFormats) {
    WorldSpec spec;
    spec.m = 4;
    spec.phi = 0.4;
    spec.questions = 5;
    spec.voters = 7;
    const auto data = simulate_data(spec, default_formats(), 3);
    ASSERT_EQ(data.questions.size(), 5u);
    ASSERT_EQ(data.elections.size(), 30u);
    EXPECT_EQ(data.questions[0].question_id, "q00001");
    EXPECT_EQ(data.questions[0].domain, "synthetic");
    // rank-none and rank-rank votes of one question are the same observations.
    const auto& rn = data.elections[3];
    const auto& rr = data.elections[5];
    ASSERT_EQ(rn.format(), parse_format("rank-none"));
    ASSERT_EQ(rr.format(), parse_format("rank-rank"));
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(rn.responses[i].vote, rr.responses[i].vote);

    const auto again = simulate_data(spec, default_formats(), 3);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(again.questions[i].ground_truth, data.questions[i].ground_truth);

    spec.domains = 2;
    const auto two = simulate_data(spec, {parse_format("top-none")}, 3);
    EXPECT_EQ(two.questions[0].domain, "synthetic-1");
    EXPECT_EQ(two.questions[1].domain, "synthetic-2");
}

TEST(RunExperiment, ProducesAllMetricFamilies) {
    const auto config = small_world_config();
    const auto r = run_experiment(config);
    EXPECT_TRUE(r.failures.empty());
    EXPECT_EQ(r.split.train.size(), 6u);
    EXPECT_EQ(r.split.test.size(), 10u);
    EXPECT_EQ(r.calibrations.size(), 4u);  // formats with predictions
    EXPECT_EQ(r.calibrations[0].loss_surface.size(), 16u);

    std::set<std::string> metrics;
    std::set<std::string> formats;
    for (const auto& row : r.metrics.raw) {
        metrics.insert(row.metric);
        formats.insert(row.format);
        EXPECT_TRUE(r.split.test.contains(row.question_id));
    }
    for (const char* m : {"sp_top_error", "sp_kt", "vote_top_error", "vote_kt", "prediction_top_error",
                          "prediction_kt", "baseline_borda_kt", "baseline_irv_top_error"}) {
        EXPECT_TRUE(metrics.contains(m)) << m;
    }
    EXPECT_TRUE(formats.contains("rank-pooled"));
    EXPECT_EQ(formats.size(), 7u);

    for (const auto& s : r.metrics.summary) {
        if (s.format == "top-none" && s.metric == "sp_kt" && s.domain == "all") EXPECT_EQ(s.n, 10u);
    }
}

TEST(RunExperiment, FailuresAreRecordedNotFatal) {
    auto config = small_world_config();
    // Too few training questions per domain to calibrate.
    config.train_per_domain = 9;
    EXPECT_THROW(run_experiment(config), InputError);

    // Calibrating on questions whose slices hold no predictions fails per format.
    auto data = simulate_data(*config.world, {parse_format("top-none")}, 1);
    config.train_per_domain = 3;
    config.formats = {parse_format("top-none"), parse_format("top-top")};
    const auto r = run_experiment(config, data);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_NE(r.failures[0].find("top-top"), std::string::npos);
    EXPECT_FALSE(r.metrics.raw.empty());
}

TEST(Report, EmptyMetricsGiveHeaderOnlyTables) {
    TempDir dir("spvote_report_empty");
    write_metrics_report(dir.path, MetricsReport{});
    EXPECT_EQ(slurp(dir.path / "summary.csv"), "format,domain,metric,mean,ci95_half_width,n\n");
    EXPECT_EQ(slurp(dir.path / "per_question.csv"), "unit,format,domain,metric,question_id,voter_id,value\n");
    EXPECT_TRUE(fs::exists(dir.path / "notes.txt"));
}

TEST(Report, OneFormatOneMetric) {
    TempDir dir("spvote_report_one");
    MetricsReport m;
    m.raw = {{"question", "top-none", "geo", "sp_kt", "q1", "", 2.0},
             {"question", "top-none", "geo", "sp_kt", "q2", "", 4.0}};
    m.summary = summarize(m.raw);
    write_metrics_report(dir.path, m);
    const auto table = slurp(dir.path / "tables" / "sp_kt.csv");
    EXPECT_EQ(table,
              "format,domain,metric,mean,ci95_half_width,n\n"
              "top-none,all,sp_kt,3.000000,1.960000,2\n"
              "top-none,geo,sp_kt,3.000000,1.960000,2\n");
    const auto svg = slurp(dir.path / "charts" / "sp_kt.svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("top-none"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Report, TwoRunsByteIdentical) {
    TempDir a("spvote_report_a");
    TempDir b("spvote_report_b");
    const auto config = small_world_config();
    write_experiment_report(a.path, run_experiment(config));
    write_experiment_report(b.path, run_experiment(config));
    const auto ta = tree(a.path);
    EXPECT_GT(ta.size(), 10u);
    EXPECT_TRUE(ta.contains("params.csv"));
    EXPECT_TRUE(ta.contains("split.csv"));
    EXPECT_TRUE(ta.contains("calibration_rank-rank.csv"));
    EXPECT_EQ(ta, tree(b.path));
}

TEST(Report, UnwritableDirectory) {
    EXPECT_THROW(write_metrics_report("/proc/spvote/none", MetricsReport{}), std::exception);
}
