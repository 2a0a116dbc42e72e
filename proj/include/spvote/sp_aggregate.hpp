#pragma once

// Pairwise surprisingly-popular voting.
//
// For a pair (a,b) the surviving reports are split into N_ab (r=1) and N_ba
// (r=0). With f = |N_ab| / (|N_ab| + |N_ba|), g(1|1) the mean q over N_ab,
// g(1|0) the mean q over N_ba and g(0|x) = 1 - g(1|x):
//
//     Vbar(a>b) = f       * sum_i g(r_i|1) / g(1|r_i)
//     Vbar(b>a) = (1 - f) * sum_i g(r_i|0) / g(0|r_i)
//
// and the direction with the larger prediction-normalized vote wins.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "spvote/core.hpp"
#include "spvote/pairwise.hpp"

namespace spvote {

/// No report survived extraction for a pair.
class NoEvidenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PairOutcome { AOverB, BOverA, Tie };

/// How the normalized votes are summed.
enum class SpMode {
    PerVoter,   ///< sum over voters, each weighted by its own signal
    SignalSum,  ///< sum over the two signal values once each
};

struct PairDecision {
    AltPair pair;
    double v_ab = 0.0;
    double v_ba = 0.0;
    PairOutcome outcome = PairOutcome::Tie;
    /// Resolved direction; for ties this is the seeded coin flip.
    bool a_wins = true;
    double f_ab = 0.0;
    std::optional<double> g11;
    std::optional<double> g10;
    std::size_t n_ab = 0;
    std::size_t n_ba = 0;
};

/// Relative tolerance under which two normalized votes count as tied.
inline constexpr double kTieTolerance = 1e-12;

PairDecision sp_pair_decision(std::span<const PairwiseReport> reports, std::uint64_t rng_seed,
                              AltPair pair = {0, 1}, SpMode mode = SpMode::PerVoter);

/// Complete (possibly cyclic) comparison of all alternative pairs.
class Tournament {
public:
    Tournament() = default;
    explicit Tournament(std::size_t m);

    static Tournament from_ranking(const Ranking& ranking);

    std::size_t m() const noexcept { return m_; }
    /// Directs the edge winner -> loser. `coin` marks an edge decided by a tie-break.
    void set(AltId winner, AltId loser, bool coin = false);
    bool has_edge(AltId a, AltId b) const;
    /// True iff a beats b; InputError when the pair is unset.
    bool beats(AltId a, AltId b) const;
    bool coin_resolved(AltId a, AltId b) const;
    bool complete() const noexcept;
    std::vector<AltPair> coin_pairs() const;

    friend bool operator==(const Tournament&, const Tournament&) = default;

private:
    std::size_t slot(AltId a, AltId b) const;

    std::size_t m_ = 0;
    std::vector<signed char> first_wins_;  // per pair (a<b): -1 unset, 1 a wins, 0 b wins
    std::vector<unsigned char> coin_;
};

/// Runs SP on every pair of a single-format election with predictions.
/// Pairs without surviving reports are settled by a seeded fair coin.
Tournament aggregate_election(const Election& election, const ExtractionParams& params,
                              std::uint64_t rng_seed, SpMode mode = SpMode::PerVoter);

/// All pair decisions of aggregate_election, for auditing. Pairs without
/// evidence are absent.
std::vector<PairDecision> pair_decisions(const Election& election, const ExtractionParams& params,
                                         std::uint64_t rng_seed, SpMode mode = SpMode::PerVoter);

/// Top-None: tournament ordering alternatives by plurality score.
Tournament fallback_top_none(const Election& election, std::uint64_t rng_seed);
/// Rank-None: pairwise majority tournament.
Tournament fallback_rank_none(const Election& election, std::uint64_t rng_seed);

/// Dispatches on the election's format: SP for formats with predictions,
/// the matching fallback otherwise.
Tournament aggregate(const Election& election, const ExtractionParams& params,
                     std::uint64_t rng_seed, SpMode mode = SpMode::PerVoter);

}  // namespace spvote
