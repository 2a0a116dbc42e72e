#pragma once

// Conventional voting rules over full rank votes. Every rule returns exact
// distributions: ties are branched uniformly and the branches weighted, never
// sampled.
//
// Full rankings (for Kendall-Tau error): score rules order alternatives by
// descending score; IRV and plurality-with-runoff use reverse elimination
// order, with first-round runoff losers ordered by plurality score.
// Ties that decide the winner are branched uniformly. Ties further down are
// settled by running the same rule on the profile restricted to the tied
// alternatives, so a unanimous profile comes back unchanged.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spvote/core.hpp"

namespace spvote {

class Profile {
public:
    /// Nonempty; all rankings over the same alternatives.
    explicit Profile(std::vector<Ranking> rankings);

    std::size_t m() const noexcept { return rankings_.front().size(); }
    std::size_t voters() const noexcept { return rankings_.size(); }
    std::span<const Ranking> rankings() const noexcept { return rankings_; }

    /// Voters ranking a above b.
    long long support(AltId a, AltId b) const;

private:
    std::vector<Ranking> rankings_;
};

/// Rank votes of rank-vote elections (predictions dropped). Elections may be
/// of different formats but must share one question size.
Profile profile_from(std::span<const Election> elections);

enum class Rule { Plurality, PluralityRunoff, Borda, Copeland, Irv, Maximin };

std::string_view rule_name(Rule rule);
std::span<const Rule> all_rules();

/// Winning probability per alternative.
using WinnerDistribution = std::vector<double>;

struct WeightedRanking {
    Ranking ranking;
    double probability = 0.0;
};

WinnerDistribution plurality(const Profile& p);
WinnerDistribution plurality_runoff(const Profile& p);
WinnerDistribution borda(const Profile& p);
WinnerDistribution copeland_rule(const Profile& p);
WinnerDistribution irv(const Profile& p);
WinnerDistribution maximin(const Profile& p);

WinnerDistribution winner_distribution(Rule rule, const Profile& p);
/// Output ranking distribution; its top-marginal equals winner_distribution.
std::vector<WeightedRanking> rule_rankings(Rule rule, const Profile& p);

/// Exact expected Kendall-Tau distance of the rule's ranking to `truth`.
double baseline_kt(Rule rule, const Profile& p, const Ranking& truth);
/// 1 - P(rule elects truth's top).
double baseline_top_error(Rule rule, const Profile& p, const Ranking& truth);

/// Alternative beating every other by strict majority, if any.
std::optional<AltId> condorcet_winner(const Profile& p);

}  // namespace spvote
