#include "spvote/calib.hpp"

#include <algorithm>
#include <cmath>

#include "spvote/random.hpp"
#include "spvote/tournament.hpp"

namespace spvote {

namespace {

std::vector<double> axis(double lo, double hi, double step) {
    // Values are lo + i*step, rounded to 1e-9 so that 0.55 + 16*0.025 == 0.95.
    std::vector<double> v;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) {
        v.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return v;
}

CalibResult search(std::span<const Election> elections, const GridSpec& grid, Loss loss,
                   std::uint64_t rng_seed, SpMode mode) {
    grid.validate();
    if (elections.empty()) throw InputError("grid search needs labeled training elections");
    CalibResult result;
    for (const auto& e : elections) {
        if (!e.question.ground_truth) {
            throw InputError("training question " + e.question.question_id + " has no ground truth");
        }
        if (!e.format().has_prediction()) {
            throw InputError("cannot calibrate " + to_token(e.format()) + ": it has no predictions");
        }
        result.train_question_ids.insert(e.question.question_id);
    }

    bool first = true;
    for (const double alpha : grid.alphas()) {
        for (const double beta : grid.betas()) {
            const ExtractionParams params{alpha, beta};
            const double value = evaluate_cell(elections, params, loss, rng_seed, mode);
            result.loss_surface[{alpha, beta}] = value;
            // Cells are visited in (alpha, beta) order, so strict < keeps the smallest.
            if (first || value < result.best_loss) {
                result.best = params;
                result.best_loss = value;
                first = false;
            }
        }
    }
    return result;
}

}  // namespace

void GridSpec::validate() const {
    if (!(alpha_step > 0.0 && beta_step > 0.0)) throw InputError("grid steps must be positive");
    if (alpha_max < alpha_min || beta_max < beta_min) throw InputError("grid bounds are reversed");
    for (const double a : alphas()) ExtractionParams{a, 0.25}.validate();
    for (const double b : betas()) ExtractionParams{0.75, b}.validate();
}

std::vector<double> GridSpec::alphas() const { return axis(alpha_min, alpha_max, alpha_step); }
std::vector<double> GridSpec::betas() const { return axis(beta_min, beta_max, beta_step); }

std::string_view loss_name(Loss loss) {
    switch (loss) {
        case Loss::MseKt: return "mse_kt";
        case Loss::MseTop: return "mse_top";
        case Loss::Pairwise01: return "pairwise_01";
    }
    return "unknown";
}

Loss parse_loss(std::string_view name) {
    for (const auto l : {Loss::MseKt, Loss::MseTop, Loss::Pairwise01}) {
        if (loss_name(l) == name) return l;
    }
    throw InputError("unknown loss '" + std::string(name) + "'");
}

TrainTestSplit split_train_test(std::span<const Question> questions, std::size_t per_domain_train,
                                std::uint64_t rng_seed) {
    std::map<std::string, std::vector<std::string>> by_domain;
    for (const auto& q : questions) by_domain[q.domain].push_back(q.question_id);

    TrainTestSplit split;
    for (auto& [domain, ids] : by_domain) {
        if (ids.size() < per_domain_train) {
            throw InputError("domain '" + domain + "' has " + std::to_string(ids.size()) +
                             " questions, fewer than the " + std::to_string(per_domain_train) +
                             " needed for training");
        }
        std::sort(ids.begin(), ids.end());
        Rng rng(derive_seed(rng_seed, {hash_tag(domain)}));
        for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.index(i)]);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            (i < per_domain_train ? split.train : split.test).insert(ids[i]);
        }
    }
    return split;
}

double question_error(const Tournament& t, const Ranking& truth, Loss loss) {
    switch (loss) {
        case Loss::MseKt: return expected_kt_distance(t, truth);
        case Loss::MseTop: return expected_top_error(t, truth);
        case Loss::Pairwise01:
            return expected_kt_distance(t, truth) / static_cast<double>(pair_count(t.m()));
    }
    throw InputError("unknown loss");
}

std::uint64_t election_seed(std::uint64_t base, const Election& election) {
    return derive_seed(base, {hash_tag(election.question.question_id),
                              hash_tag(to_token(election.format()))});
}

double evaluate_cell(std::span<const Election> elections, const ExtractionParams& params, Loss loss,
                     std::uint64_t rng_seed, SpMode mode) {
    if (elections.empty()) throw InputError("no elections to evaluate");
    double total = 0.0;
    for (const auto& e : elections) {
        const auto t = aggregate(e, params, election_seed(rng_seed, e), mode);
        const double err = question_error(t, *e.question.ground_truth, loss);
        total += err * err;
    }
    return total / static_cast<double>(elections.size());
}

CalibResult grid_search(std::span<const Election> train, ElicitationFormat format,
                        const GridSpec& grid, Loss loss, std::uint64_t rng_seed, SpMode mode) {
    std::vector<Election> slice;
    for (const auto& e : train) {
        if (e.format() == format) slice.push_back(e);
    }
    auto result = search(slice, grid, loss, rng_seed, mode);
    result.format = format;
    return result;
}

CalibResult grid_search_global(std::span<const Election> train, const GridSpec& grid, Loss loss,
                               std::uint64_t rng_seed, SpMode mode) {
    std::vector<Election> slice;
    for (const auto& e : train) {
        if (e.format().has_prediction()) slice.push_back(e);
    }
    return search(slice, grid, loss, rng_seed, mode);
}

}  // namespace spvote
