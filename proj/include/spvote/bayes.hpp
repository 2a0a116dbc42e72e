#pragma once

// Exact Bayesian crowd model over rankings.
//
// A ground truth pi is drawn from a prior P; each voter observes a noisy
// ranking sigma ~ Pr_s(.|pi). Knowing P and Pr_s, a voter derives
//
//     Pr_g(pi | sigma)      = Pr_s(sigma|pi) P(pi) / sum_pi' Pr_s(sigma|pi') P(pi')
//     Pr_o(sigma' | sigma)  = sum_pi Pr_s(sigma'|pi) Pr_g(pi|sigma)
//
// and reports votes and predictions derived from sigma and Pr_o(.|sigma).
// Everything is computed by enumerating all m! rankings, so m is capped.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spvote/core.hpp"
#include "spvote/pairwise.hpp"
#include "spvote/random.hpp"

namespace spvote {

inline constexpr std::size_t kDefaultMaxAlternatives = 6;

/// All m! rankings in lexicographic order.
class RankingSpace {
public:
    explicit RankingSpace(std::size_t m, std::size_t max_alternatives = kDefaultMaxAlternatives);

    std::size_t m() const noexcept { return m_; }
    std::size_t size() const noexcept { return rankings_.size(); }
    const Ranking& at(std::size_t index) const { return rankings_.at(index); }
    std::span<const Ranking> rankings() const noexcept { return rankings_; }
    /// Lexicographic rank (Lehmer code) of `r`.
    std::size_t index_of(const Ranking& r) const;

private:
    std::size_t m_;
    std::vector<Ranking> rankings_;
};

/// Z(phi) = prod_{i=1..m} (1 + phi + ... + phi^{i-1}).
double mallows_normalizer(std::size_t m, double phi);

/// Pr(sigma) proportional to phi^{KT(sigma, center)}, indexed like `space`.
std::vector<double> mallows_pmf(const RankingSpace& space, const Ranking& center, double phi);

class WorldModel {
public:
    /// Mallows signal centered at the truth. An empty prior means uniform.
    static WorldModel mallows(std::size_t m, double phi, std::vector<double> prior = {});

    /// signal[t][s] = Pr_s(space.at(s) | space.at(t)).
    static WorldModel explicit_table(std::size_t m, std::vector<double> prior,
                                     const std::vector<std::vector<double>>& signal);

    std::size_t m() const noexcept { return space_->m(); }
    const RankingSpace& space() const noexcept { return *space_; }
    /// Dispersion for Mallows worlds.
    std::optional<double> phi() const noexcept { return phi_; }

    std::span<const double> prior() const noexcept { return prior_; }
    std::span<const double> signal_row(std::size_t truth) const;
    std::span<const double> posterior_row(std::size_t observed) const;
    std::span<const double> other_vote_row(std::size_t observed) const;
    /// Pr_o mass of rankings whose top is each alternative.
    std::span<const double> top_mass(std::size_t observed) const;
    /// Pr_o(another voter ranks a above b | observed).
    double pairwise_prediction(std::size_t observed, AltPair pair) const;

    /// The same world with alternative x renamed to relabel.at(x).
    WorldModel relabeled(const Ranking& relabel) const;

private:
    WorldModel(std::shared_ptr<const RankingSpace> space, std::vector<double> prior,
               std::vector<double> signal, std::optional<double> phi);

    std::span<const double> row(const std::vector<double>& matrix, std::size_t i,
                                std::size_t width) const;

    std::shared_ptr<const RankingSpace> space_;
    std::optional<double> phi_;
    std::vector<double> prior_;
    std::vector<double> signal_;     // K x K, [truth][observed]
    std::vector<double> posterior_;  // K x K, [observed][truth]
    std::vector<double> other_;      // K x K, [observed][other's observed]
    std::vector<double> top_mass_;   // K x m
    std::vector<double> pairwise_;   // K x C(m,2)
};

std::vector<double> uniform_prior(std::size_t m);
/// Mallows prior around `center` (identity by default).
std::vector<double> mallows_prior(std::size_t m, double phi,
                                  std::optional<Ranking> center = std::nullopt);

std::vector<double> posterior(const WorldModel& world, const Ranking& observed);
std::vector<double> other_vote_distribution(const WorldModel& world, const Ranking& observed);

struct VoterBelief {
    Ranking observed;
    std::vector<double> posterior;
    std::vector<double> other_vote;
};

VoterBelief voter_belief(const WorldModel& world, const Ranking& observed);

struct GenerationOptions {
    /// Probability that a prediction is replaced by a uniformly random report
    /// of the same kind (imperfect respondents).
    double prediction_noise = 0.0;
};

Ranking sample_truth(const WorldModel& world, Rng& rng);
/// Index of a noisy observation of `truth`.
std::size_t sample_signal(const WorldModel& world, const Ranking& truth, Rng& rng);

/// Vote and prediction a voter with observation `observed` reports under
/// `format`. `rng` settles argmax ties and prediction noise.
ResponseRecord respond(const WorldModel& world, std::size_t observed, ElicitationFormat format,
                       Rng& rng, const GenerationOptions& options = {});

ResponseRecord generate_response(const WorldModel& world, const Ranking& truth,
                                 ElicitationFormat format, std::uint64_t rng_seed,
                                 const GenerationOptions& options = {});

/// n i.i.d. voters for `question` (ground truth required). Observations depend
/// only on (seed, voter), so elections generated with one seed under different
/// formats share their voters' signals.
Election generate_election(const WorldModel& world, const Question& question,
                           ElicitationFormat format, std::size_t n, std::uint64_t rng_seed,
                           const GenerationOptions& options = {});

/// Two-alternative world in which the majority is wrong under the likelier
/// truth: voters see a>b with rate p_high when a>b is true and p_low when b>a
/// is true, and the prior puts `prior_majority_wrong` on b>a.
WorldModel adversarial_world(double p_high, double p_low, double prior_majority_wrong = 0.75);
/// Extraction parameters encoding the two worlds' rates: alpha = p_high,
/// beta = 1 - p_low.
ExtractionParams adversarial_params(double p_high, double p_low);

/// Pr_g(pi|pi) > Pr_g(pi|pi') for all distinct pi, pi'.
bool satisfies_recovery_condition(const WorldModel& world);

/// Pairwise reports of rank-vote voters with exact cardinal predictions
/// q = Pr_o(a>b | observed).
std::vector<PairwiseReport> cardinal_pair_reports(const WorldModel& world, const Election& election,
                                                  AltPair pair);

}  // namespace spvote
