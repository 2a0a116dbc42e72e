#pragma once

// Grid search for the (alpha, beta) extraction parameters on labeled
// training elections.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spvote/core.hpp"
#include "spvote/pairwise.hpp"
#include "spvote/sp_aggregate.hpp"

namespace spvote {

struct GridSpec {
    double alpha_min = 0.55;
    double alpha_max = 0.95;
    double alpha_step = 0.025;
    double beta_min = 0.05;
    double beta_max = 0.45;
    double beta_step = 0.025;

    void validate() const;
    std::vector<double> alphas() const;
    std::vector<double> betas() const;
};

/// Per-question error that is squared and averaged over questions.
enum class Loss {
    MseKt,       ///< expected Kendall-Tau distance
    MseTop,      ///< expected top-alternative error
    Pairwise01,  ///< fraction of wrongly decided pairs
};

std::string_view loss_name(Loss loss);
Loss parse_loss(std::string_view name);

struct CalibResult {
    std::optional<ElicitationFormat> format;  ///< nullopt for a pooled (global) search
    ExtractionParams best;
    double best_loss = 0.0;
    std::map<std::pair<double, double>, double> loss_surface;
    std::set<std::string> train_question_ids;
};

struct TrainTestSplit {
    std::set<std::string> train;
    std::set<std::string> test;
};

/// Seeded per-domain split: `per_domain_train` questions of each domain train.
TrainTestSplit split_train_test(std::span<const Question> questions, std::size_t per_domain_train,
                                std::uint64_t rng_seed);

/// Unsquared per-question error of `t` against `truth`.
double question_error(const Tournament& t, const Ranking& truth, Loss loss);

/// Seed used to aggregate one election; identical across grid cells.
std::uint64_t election_seed(std::uint64_t base, const Election& election);

/// Mean squared per-question error of SP under `params`.
double evaluate_cell(std::span<const Election> elections, const ExtractionParams& params, Loss loss,
                     std::uint64_t rng_seed, SpMode mode = SpMode::PerVoter);

/// Evaluates every grid cell on the elections of `format` and returns the
/// argmin (ties: smallest alpha, then smallest beta).
CalibResult grid_search(std::span<const Election> train, ElicitationFormat format,
                        const GridSpec& grid, Loss loss, std::uint64_t rng_seed,
                        SpMode mode = SpMode::PerVoter);

/// One parameter pair for all prediction formats pooled together.
CalibResult grid_search_global(std::span<const Election> train, const GridSpec& grid, Loss loss,
                               std::uint64_t rng_seed, SpMode mode = SpMode::PerVoter);

}  // namespace spvote
