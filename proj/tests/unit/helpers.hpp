#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spvote/core.hpp"

namespace spvote::testing {

inline Question abcd(std::optional<Ranking> truth = Ranking::identity(4)) {
    return make_question("q1", "test", {"A", "B", "C", "D"}, std::move(truth));
}

inline Question labeled(std::size_t m, std::string id = "q1") {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.emplace_back(1, static_cast<char>('A' + i));
    return make_question(std::move(id), "test", labels, Ranking::identity(m));
}

inline ResponseRecord response(const Question& q, std::size_t voter, ElicitationFormat f, VoteReport v,
                               PredictionReport p = NoPrediction{}) {
    return {q.question_id, "v" + std::to_string(voter), f, std::move(v), std::move(p)};
}

inline ElicitationFormat fmt_of(const char* token) { return parse_format(token); }

/// Rank-vote election; empty prediction vectors mean no prediction.
inline Election rank_election(const Question& q, const std::vector<std::vector<AltId>>& votes,
                              const std::vector<std::vector<AltId>>& predictions = {}) {
    Election e{q, {}};
    const auto f = predictions.empty() ? fmt_of("rank-none") : fmt_of("rank-rank");
    for (std::size_t i = 0; i < votes.size(); ++i) {
        PredictionReport p = NoPrediction{};
        if (!predictions.empty()) p = Ranking(predictions[i]);
        e.responses.push_back(response(q, i, f, Ranking(votes[i]), p));
    }
    return e;
}

inline Election top_election(const Question& q, const std::vector<AltId>& votes,
                             const std::vector<AltId>& predictions = {}) {
    Election e{q, {}};
    const auto f = predictions.empty() ? fmt_of("top-none") : fmt_of("top-top");
    for (std::size_t i = 0; i < votes.size(); ++i) {
        PredictionReport p = NoPrediction{};
        if (!predictions.empty()) p = TopChoice{predictions[i]};
        e.responses.push_back(response(q, i, f, TopChoice{votes[i]}, p));
    }
    return e;
}

}  // namespace spvote::testing
