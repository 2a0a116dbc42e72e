#pragma once

// Projection of (vote, prediction) reports onto a single alternative pair.
//
// A pairwise vote r is 1 when the voter ranks a above b and 0 otherwise. The
// ordinal prediction is turned into a cardinal estimate q of how often other
// voters report a above b:
//
//                     prediction a>b   prediction b>a   prediction elsewhere
//     r = 1               alpha          1 - alpha            1/2
//     r = 0             1 - beta           beta               1/2
//
// "prediction elsewhere" only arises for single-alternative predictions that
// name neither a nor b.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spvote/core.hpp"

namespace spvote {

struct ExtractionParams {
    double alpha = 0.7;
    double beta = 0.3;

    /// Throws InputError unless 0.5 < alpha < 1 and 0 < beta < 0.5.
    void validate() const;
    friend bool operator==(const ExtractionParams&, const ExtractionParams&) = default;
};

struct PairwiseReport {
    std::string voter_id;
    int r = 0;       ///< 1 iff the voter ranks a above b.
    double q = 0.5;  ///< cardinal prediction that another voter reports a above b.
    /// False for formats without predictions; q then holds the 0.5 sentinel.
    bool has_prediction = true;
};

/// Pairwise vote for (a,b), or nullopt when a top-choice vote names neither.
std::optional<int> extract_pair_vote(const VoteReport& vote, AltPair pair, std::size_t m);

/// Cardinal prediction for (a,b) given the voter's already-extracted pairwise
/// vote `r`. NoPrediction is a contract violation (InputError).
double extract_pair_prediction(const PredictionReport& prediction, int r, AltPair pair,
                               const ExtractionParams& params);

/// One report per voter who is not discarded for the pair, in input order.
/// Pairs are normalized so that a < b. All responses must share one format.
std::vector<PairwiseReport> extract_reports(const Election& election, AltPair pair,
                                            const ExtractionParams& params);

}  // namespace spvote
