#include "spvote/pairwise.hpp"

#include <utility>
#include <variant>

namespace spvote {

namespace {

void check_pair(AltPair pair, std::size_t m) {
    if (pair.a == pair.b) throw InputError("pair needs two distinct alternatives");
    for (const AltId x : {pair.a, pair.b}) {
        if (x < 0 || static_cast<std::size_t>(x) >= m) {
            throw InputError("pair alternative " + std::to_string(x) + " outside the question");
        }
    }
}

double cardinal(bool predicts_a, int r, const ExtractionParams& p) {
    if (r == 1) return predicts_a ? p.alpha : 1.0 - p.alpha;
    return predicts_a ? 1.0 - p.beta : p.beta;
}

}  // namespace

void ExtractionParams::validate() const {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw InputError("alpha must lie in (0.5, 1), got " + std::to_string(alpha));
    }
    if (!(beta > 0.0 && beta < 0.5)) {
        throw InputError("beta must lie in (0, 0.5), got " + std::to_string(beta));
    }
}

std::optional<int> extract_pair_vote(const VoteReport& vote, AltPair pair, std::size_t m) {
    check_pair(pair, m);
    if (const auto* ranking = std::get_if<Ranking>(&vote)) {
        if (ranking->size() != m) throw InputError("vote ranking does not match the question size");
        return ranking->prefers(pair.a, pair.b) ? 1 : 0;
    }
    const AltId top = std::get<TopChoice>(vote).alt;
    if (top < 0 || static_cast<std::size_t>(top) >= m) {
        throw InputError("top-choice vote " + std::to_string(top) + " outside the question");
    }
    if (top == pair.a) return 1;
    if (top == pair.b) return 0;
    return std::nullopt;
}

double extract_pair_prediction(const PredictionReport& prediction, int r, AltPair pair,
                               const ExtractionParams& params) {
    if (r != 0 && r != 1) throw InputError("pairwise vote must be 0 or 1");
    if (const auto* ranking = std::get_if<Ranking>(&prediction)) {
        return cardinal(ranking->prefers(pair.a, pair.b), r, params);
    }
    if (const auto* top = std::get_if<TopChoice>(&prediction)) {
        if (top->alt != pair.a && top->alt != pair.b) return 0.5;
        return cardinal(top->alt == pair.a, r, params);
    }
    throw InputError("cannot extract a pairwise prediction from a format without predictions");
}

std::vector<PairwiseReport> extract_reports(const Election& election, AltPair pair,
                                            const ExtractionParams& params) {
    if (election.responses.empty()) {
        throw InputError("cannot extract reports from an empty election");
    }
    const auto format = election.format();
    if (format.has_prediction()) params.validate();
    if (pair.a > pair.b) std::swap(pair.a, pair.b);

    const std::size_t m = election.question.m();
    std::vector<PairwiseReport> out;
    out.reserve(election.responses.size());
    for (const auto& resp : election.responses) {
        const auto r = extract_pair_vote(resp.vote, pair, m);
        if (!r) continue;
        PairwiseReport rep{resp.voter_id, *r, 0.5, format.has_prediction()};
        if (rep.has_prediction) rep.q = extract_pair_prediction(resp.prediction, *r, pair, params);
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace spvote
