#pragma once

// Turning tournaments into the two prediction tasks: picking the top
// alternative (Copeland winner, uniform tie-breaking) and measuring ranking
// error (pairwise Kendall-Tau disagreement with the truth).

#include <cstdint>
#include <optional>
#include <vector>

#include "spvote/core.hpp"
#include "spvote/sp_aggregate.hpp"

namespace spvote {

/// Out-degree of each alternative.
std::vector<int> copeland_scores(const Tournament& t);

struct TopSelection {
    std::vector<AltId> winners;        ///< Copeland argmax set, ascending ids
    std::vector<double> probability;   ///< per alternative, 1/|winners| on the set
};

TopSelection select_top(const Tournament& t);

/// 1 - P(truth's top is selected), exact over Copeland ties.
double top_error(const Tournament& t, const Ranking& truth);

/// Pairs whose direction disagrees with `truth`.
int kt_distance(const Tournament& t, const Ranking& truth);

int ranking_kt(const Ranking& r1, const Ranking& r2);

/// Ranking induced by a transitive tournament; nullopt when it has a cycle.
std::optional<Ranking> induced_ranking(const Tournament& t);

/// top_error averaged exactly over both directions of every coin-resolved
/// edge, as if those coins had not been flipped yet.
double expected_top_error(const Tournament& t, const Ranking& truth);
/// kt_distance with each coin-resolved edge counted as 1/2.
double expected_kt_distance(const Tournament& t, const Ranking& truth);

/// Monte Carlo counterparts: re-flip coin edges and sample a Copeland winner.
double sampled_top_error(const Tournament& t, const Ranking& truth, int samples, std::uint64_t seed);
double sampled_kt_distance(const Tournament& t, const Ranking& truth, int samples, std::uint64_t seed);

}  // namespace spvote
