#include "spvote/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "spvote/baselines.hpp"
#include "spvote/random.hpp"
#include "spvote/tournament.hpp"

namespace spvote {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InputError("config key '" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InputError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw InputError("config key '" + key + "' expects true/false, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::string domain_of(const Question& q) { return q.domain.empty() ? "default" : q.domain; }

void add_response_rows(const Election& e, const std::string& fmt, std::vector<RawMetric>& raw) {
    const auto& truth = *e.question.ground_truth;
    const auto domain = domain_of(e.question);
    const auto& qid = e.question.question_id;
    for (std::size_t i = 0; i < e.responses.size(); ++i) {
        const auto& r = e.responses[i];
        raw.push_back({"response", fmt, domain, "vote_top_error", qid, r.voter_id,
                       vote_top_error(r.vote, truth)});
        if (const auto kt = vote_kt(r.vote, truth)) {
            raw.push_back({"response", fmt, domain, "vote_kt", qid, r.voter_id, *kt});
        }
        const auto pe = prediction_errors(e, i);
        if (pe.top_error) {
            raw.push_back({"response", fmt, domain, "prediction_top_error", qid, r.voter_id, *pe.top_error});
        }
        if (pe.kt) raw.push_back({"response", fmt, domain, "prediction_kt", qid, r.voter_id, *pe.kt});
    }
}

void add_baseline_rows(const std::vector<Election>& slices, const std::string& label,
                       std::vector<RawMetric>& raw) {
    const auto& q = slices.front().question;
    const Profile profile = profile_from(slices);
    for (const Rule rule : all_rules()) {
        const std::string name = "baseline_" + std::string(rule_name(rule));
        raw.push_back({"question", label, domain_of(q), name + "_top_error", q.question_id, "",
                       baseline_top_error(rule, profile, *q.ground_truth)});
        raw.push_back({"question", label, domain_of(q), name + "_kt", q.question_id, "",
                       baseline_kt(rule, profile, *q.ground_truth)});
    }
}

}  // namespace

std::vector<ElicitationFormat> default_formats() {
    const auto all = all_formats();
    return {all.begin(), all.end()};
}

WorldModel WorldSpec::build() const {
    std::vector<double> p;
    if (prior == "uniform") {
        p = uniform_prior(m);
    } else if (prior == "mallows") {
        p = mallows_prior(m, prior_phi);
    } else {
        throw InputError("unknown prior '" + prior + "' (expected uniform or mallows)");
    }
    return WorldModel::mallows(m, phi, std::move(p));
}

void ExperimentConfig::validate() const {
    const bool data = responses_path.has_value();
    if (data == world.has_value()) {
        throw InputError("configure exactly one of a responses file or a simulated world");
    }
    if (questions_path && !data) throw InputError("a questions file needs a responses file");
    if (formats.empty()) throw InputError("no formats selected");
    if (calibrate) {
        grid.validate();
    } else {
        params.validate();
    }
    if (metric_mode == MetricMode::Sampled && samples < 1) {
        throw InputError("sampled metrics need at least one sample");
    }
    if (world) {
        if (world->questions == 0 || world->voters == 0 || world->domains == 0) {
            throw InputError("simulated world needs questions, voters and domains > 0");
        }
        if (!(world->prediction_noise >= 0.0 && world->prediction_noise <= 1.0)) {
            throw InputError("prediction noise must lie in [0, 1]");
        }
    }
}

void apply_config_entry(ExperimentConfig& c, const std::string& key, const std::string& v,
                        const std::filesystem::path& base) {
    auto world = [&]() -> WorldSpec& {
        if (!c.world) c.world.emplace();
        return *c.world;
    };
    if (key == "responses") {
        c.responses_path = resolve(base, v);
    } else if (key == "questions") {
        c.questions_path = resolve(base, v);
    } else if (key == "world.m") {
        world().m = to_uint(key, v);
    } else if (key == "world.phi") {
        world().phi = to_double(key, v);
    } else if (key == "world.prior") {
        if (v != "uniform" && v != "mallows") throw InputError("world.prior must be uniform or mallows");
        world().prior = v;
    } else if (key == "world.prior_phi") {
        world().prior_phi = to_double(key, v);
    } else if (key == "world.prediction_noise") {
        world().prediction_noise = to_double(key, v);
    } else if (key == "world.questions") {
        world().questions = to_uint(key, v);
    } else if (key == "world.voters") {
        world().voters = to_uint(key, v);
    } else if (key == "world.domains") {
        world().domains = to_uint(key, v);
    } else if (key == "formats") {
        c.formats.clear();
        if (v == "all") {
            c.formats = default_formats();
        } else {
            std::size_t start = 0;
            while (start <= v.size()) {
                const auto comma = v.find(',', start);
                const auto token = trim(std::string_view(v).substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start));
                if (!token.empty()) c.formats.push_back(parse_format(token));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            std::sort(c.formats.begin(), c.formats.end());
            c.formats.erase(std::unique(c.formats.begin(), c.formats.end()), c.formats.end());
        }
    } else if (key == "calibrate") {
        c.calibrate = to_bool(key, v);
    } else if (key == "calibration") {
        if (v != "per-format" && v != "global") throw InputError("calibration must be per-format or global");
        c.global_calibration = v == "global";
    } else if (key == "alpha") {
        c.params.alpha = to_double(key, v);
    } else if (key == "beta") {
        c.params.beta = to_double(key, v);
    } else if (key == "grid.alpha_min") {
        c.grid.alpha_min = to_double(key, v);
    } else if (key == "grid.alpha_max") {
        c.grid.alpha_max = to_double(key, v);
    } else if (key == "grid.alpha_step") {
        c.grid.alpha_step = to_double(key, v);
    } else if (key == "grid.beta_min") {
        c.grid.beta_min = to_double(key, v);
    } else if (key == "grid.beta_max") {
        c.grid.beta_max = to_double(key, v);
    } else if (key == "grid.beta_step") {
        c.grid.beta_step = to_double(key, v);
    } else if (key == "loss") {
        c.loss = parse_loss(v);
    } else if (key == "train_per_domain") {
        c.train_per_domain = to_uint(key, v);
    } else if (key == "seed") {
        c.seed = to_uint(key, v);
    } else if (key == "out") {
        c.out_dir = resolve(base, v);
    } else if (key == "metric_mode") {
        if (v == "exact") {
            c.metric_mode = MetricMode::Exact;
        } else if (v == "sampled") {
            c.metric_mode = MetricMode::Sampled;
        } else {
            throw InputError("metric_mode must be exact or sampled");
        }
    } else if (key == "samples") {
        c.samples = static_cast<int>(to_uint(key, v));
    } else if (key == "sp_mode") {
        if (v == "per-voter") {
            c.sp_mode = SpMode::PerVoter;
        } else if (v == "signal-sum") {
            c.sp_mode = SpMode::SignalSum;
        } else {
            throw InputError("sp_mode must be per-voter or signal-sum");
        }
    } else if (key == "baselines") {
        if (v == "pooled") {
            c.baselines = BaselineMode::Pooled;
        } else if (v == "per-format") {
            c.baselines = BaselineMode::PerFormat;
        } else if (v == "off") {
            c.baselines = BaselineMode::Off;
        } else {
            throw InputError("baselines must be pooled, per-format or off");
        }
    } else if (key == "strict") {
        c.strict = to_bool(key, v);
    } else {
        throw InputError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ValidationError(number, "expected key = value");
        try {
            apply_config_entry(c, trim(std::string_view(text).substr(0, eq)),
                               trim(std::string_view(text).substr(eq + 1)), base_dir);
        } catch (const ValidationError&) {
            throw;
        } catch (const InputError& e) {
            throw ValidationError(number, e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path.string());
    return parse_config(in, path.parent_path());
}

ExperimentData simulate_data(const WorldSpec& spec, const std::vector<ElicitationFormat>& formats,
                             std::uint64_t seed) {
    const WorldModel world = spec.build();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < spec.m; ++i) labels.emplace_back(1, static_cast<char>('A' + i));
    const std::size_t width = std::max<std::size_t>(5, std::to_string(spec.questions).size());
    const GenerationOptions options{spec.prediction_noise};

    ExperimentData data;
    for (std::size_t i = 0; i < spec.questions; ++i) {
        Rng truth_rng(derive_seed(seed, {11, i}));
        std::string id = std::to_string(i + 1);
        id = "q" + std::string(width - id.size(), '0') + id;
        const std::string domain =
            spec.domains == 1 ? "synthetic" : "synthetic-" + std::to_string(i % spec.domains + 1);
        auto q = make_question(id, domain, labels, sample_truth(world, truth_rng));
        for (const auto f : formats) {
            data.elections.push_back(
                generate_election(world, q, f, spec.voters, derive_seed(seed, {13, i}), options));
        }
        data.questions.push_back(std::move(q));
    }
    return data;
}

ExperimentData load_data(const ExperimentConfig& config) {
    if (config.world) return simulate_data(*config.world, config.formats, config.seed);
    ExperimentData data;
    if (config.questions_path) data.questions = read_questions(*config.questions_path);
    auto ingest = ingest_responses(*config.responses_path, data.questions, config.strict);
    data.issues = std::move(ingest.issues);
    if (data.questions.empty()) {
        for (const auto& e : ingest.elections) {
            if (std::none_of(data.questions.begin(), data.questions.end(),
                             [&](const Question& q) { return q.question_id == e.question.question_id; })) {
                data.questions.push_back(e.question);
            }
        }
    }
    const std::set<ElicitationFormat> wanted(config.formats.begin(), config.formats.end());
    for (auto& e : ingest.elections) {
        if (wanted.contains(e.format())) data.elections.push_back(std::move(e));
    }
    return data;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentData& data) {
    config.validate();
    ExperimentResult result;
    result.issues = data.issues;

    std::vector<Question> labeled;
    for (const auto& q : data.questions) {
        if (q.ground_truth) labeled.push_back(q);
    }
    result.split = split_train_test(labeled, config.calibrate ? config.train_per_domain : 0, config.seed);

    const std::set<ElicitationFormat> wanted(config.formats.begin(), config.formats.end());
    std::vector<Election> train;
    for (const auto& e : data.elections) {
        if (wanted.contains(e.format()) && result.split.train.contains(e.question.question_id)) {
            train.push_back(e);
        }
    }

    for (const auto f : config.formats) {
        if (f.has_prediction()) result.params[f] = config.params;
    }
    if (config.calibrate) {
        if (config.global_calibration) {
            try {
                auto cal = grid_search_global(train, config.grid, config.loss, config.seed, config.sp_mode);
                for (auto& [f, p] : result.params) p = cal.best;
                result.calibrations.push_back(std::move(cal));
            } catch (const InputError& e) {
                result.failures.push_back(std::string("global calibration: ") + e.what());
            }
        } else {
            for (auto& [f, p] : result.params) {
                try {
                    auto cal = grid_search(train, f, config.grid, config.loss, config.seed, config.sp_mode);
                    p = cal.best;
                    result.calibrations.push_back(std::move(cal));
                } catch (const InputError& e) {
                    result.failures.push_back("calibration " + to_token(f) + ": " + e.what());
                }
            }
        }
    }

    auto& raw = result.metrics.raw;
    std::map<std::string, std::vector<Election>> rank_slices;  // question -> rank-vote slices
    std::vector<std::string> rank_order;
    for (const auto& e : data.elections) {
        const auto f = e.format();
        const auto& qid = e.question.question_id;
        if (!wanted.contains(f) || !result.split.test.contains(qid)) continue;
        const std::string fmt = to_token(f);
        try {
            const auto& truth = *e.question.ground_truth;
            const auto params = f.has_prediction() ? result.params.at(f) : config.params;
            const auto seed = election_seed(config.seed, e);
            const auto t = aggregate(e, params, seed, config.sp_mode);
            double top = 0.0;
            double kt = 0.0;
            if (config.metric_mode == MetricMode::Exact) {
                top = expected_top_error(t, truth);
                kt = expected_kt_distance(t, truth);
            } else {
                top = sampled_top_error(t, truth, config.samples, derive_seed(seed, {21}));
                kt = sampled_kt_distance(t, truth, config.samples, derive_seed(seed, {22}));
            }
            raw.push_back({"question", fmt, domain_of(e.question), "sp_top_error", qid, "", top});
            raw.push_back({"question", fmt, domain_of(e.question), "sp_kt", qid, "", kt});
            add_response_rows(e, fmt, raw);
        } catch (const InputError& err) {
            result.failures.push_back(qid + " " + fmt + ": " + err.what());
            continue;
        }

        if (f.vote == VoteKind::Rank && config.baselines != BaselineMode::Off) {
            if (config.baselines == BaselineMode::PerFormat) {
                add_baseline_rows({e}, fmt, raw);
            } else {
                if (!rank_slices.contains(qid)) rank_order.push_back(qid);
                rank_slices[qid].push_back(e);
            }
        }
    }
    for (const auto& qid : rank_order) add_baseline_rows(rank_slices[qid], "rank-pooled", raw);

    result.metrics.summary = summarize(raw);
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, load_data(config));
}

}  // namespace spvote
