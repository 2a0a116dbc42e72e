#include "spvote/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace spvote {

namespace {

void check_id(AltId a, std::size_t m) {
    if (a < 0 || static_cast<std::size_t>(a) >= m) {
        throw InputError("alternative id " + std::to_string(a) + " outside 0.." +
                         std::to_string(m == 0 ? 0 : m - 1));
    }
}

}  // namespace

Ranking::Ranking(std::vector<AltId> order) : order_(std::move(order)) {
    const std::size_t m = order_.size();
    position_.assign(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const AltId a = order_[i];
        check_id(a, m);
        if (position_[a] != m) {
            throw InputError("ranking repeats alternative " + std::to_string(a));
        }
        position_[a] = i;
    }
}

Ranking Ranking::identity(std::size_t m) {
    std::vector<AltId> order(m);
    std::iota(order.begin(), order.end(), 0);
    return Ranking(std::move(order));
}

std::size_t Ranking::position(AltId a) const {
    check_id(a, order_.size());
    return position_[a];
}

bool Ranking::prefers(AltId a, AltId b) const {
    if (a == b) {
        throw InputError("ranking comparison needs two distinct alternatives");
    }
    return position(a) < position(b);
}

Ranking Ranking::reversed() const {
    return Ranking(std::vector<AltId>(order_.rbegin(), order_.rend()));
}

bool ranking_prefers(const Ranking& r, AltId a, AltId b) { return r.prefers(a, b); }

std::string to_token(ElicitationFormat format) {
    std::string token = format.vote == VoteKind::Top ? "top-" : "rank-";
    switch (format.prediction) {
        case PredictionKind::None: return token + "none";
        case PredictionKind::Top: return token + "top";
        case PredictionKind::Rank: return token + "rank";
    }
    return token;
}

ElicitationFormat parse_format(std::string_view token) {
    for (const auto f : all_formats()) {
        if (to_token(f) == token) return f;
    }
    throw InputError("unknown elicitation format '" + std::string(token) + "'");
}

std::array<ElicitationFormat, 6> all_formats() {
    return {{{VoteKind::Top, PredictionKind::None},
             {VoteKind::Top, PredictionKind::Top},
             {VoteKind::Top, PredictionKind::Rank},
             {VoteKind::Rank, PredictionKind::None},
             {VoteKind::Rank, PredictionKind::Top},
             {VoteKind::Rank, PredictionKind::Rank}}};
}

void ResponseRecord::validate(std::size_t m) const {
    const bool vote_is_top = std::holds_alternative<TopChoice>(vote);
    if (vote_is_top != (format.vote == VoteKind::Top)) {
        throw InputError("vote kind does not match format " + to_token(format));
    }
    if (vote_is_top) {
        check_id(std::get<TopChoice>(vote).alt, m);
    } else if (std::get<Ranking>(vote).size() != m) {
        throw InputError("vote ranking has " + std::to_string(std::get<Ranking>(vote).size()) +
                         " alternatives, question has " + std::to_string(m));
    }

    switch (format.prediction) {
        case PredictionKind::None:
            if (!std::holds_alternative<NoPrediction>(prediction)) {
                throw InputError("prediction present under " + to_token(format));
            }
            break;
        case PredictionKind::Top:
            if (!std::holds_alternative<TopChoice>(prediction)) {
                throw InputError("expected a single-alternative prediction under " +
                                 to_token(format));
            }
            check_id(std::get<TopChoice>(prediction).alt, m);
            break;
        case PredictionKind::Rank:
            if (!std::holds_alternative<Ranking>(prediction)) {
                throw InputError("expected a ranking prediction under " + to_token(format));
            }
            if (std::get<Ranking>(prediction).size() != m) {
                throw InputError("prediction ranking does not cover the question's alternatives");
            }
            break;
    }
}

std::optional<AltId> Question::find_label(std::string_view label) const {
    for (const auto& alt : alternatives) {
        if (alt.label == label) return alt.id;
    }
    return std::nullopt;
}

void Question::validate() const {
    if (alternatives.size() < 2) {
        throw InputError("question " + question_id + " needs at least two alternatives");
    }
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (alternatives[i].id != static_cast<AltId>(i)) {
            throw InputError("question " + question_id + " alternative ids must be 0..m-1 in order");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (alternatives[j].label == alternatives[i].label) {
                throw InputError("question " + question_id + " repeats label " +
                                 alternatives[i].label);
            }
        }
    }
    if (ground_truth && ground_truth->size() != alternatives.size()) {
        throw InputError("question " + question_id + " ground truth does not cover its alternatives");
    }
}

Question make_question(std::string question_id, std::string domain,
                       const std::vector<std::string>& labels, std::optional<Ranking> ground_truth) {
    Question q;
    q.question_id = std::move(question_id);
    q.domain = std::move(domain);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        q.alternatives.push_back({static_cast<AltId>(i), labels[i]});
    }
    q.ground_truth = std::move(ground_truth);
    q.validate();
    return q;
}

void Election::validate() const {
    question.validate();
    if (responses.empty()) {
        throw InputError("election for " + question.question_id + " has no responses");
    }
    for (const auto& r : responses) {
        if (r.question_id != question.question_id) {
            throw InputError("response of voter " + r.voter_id + " belongs to question " +
                             r.question_id + ", not " + question.question_id);
        }
        r.validate(question.m());
    }
}

ElicitationFormat Election::format() const {
    if (responses.empty()) {
        throw InputError("election for " + question.question_id + " has no responses");
    }
    const auto f = responses.front().format;
    for (const auto& r : responses) {
        if (r.format != f) {
            throw InputError("election for " + question.question_id + " mixes formats " +
                             to_token(f) + " and " + to_token(r.format));
        }
    }
    return f;
}

std::vector<Election> split_by_format(const Election& election) {
    std::map<ElicitationFormat, Election> slices;
    for (const auto& r : election.responses) {
        auto [it, inserted] = slices.try_emplace(r.format);
        if (inserted) it->second.question = election.question;
        it->second.responses.push_back(r);
    }
    std::vector<Election> out;
    for (const auto f : all_formats()) {
        if (auto it = slices.find(f); it != slices.end()) out.push_back(std::move(it->second));
    }
    return out;
}

std::size_t pair_count(std::size_t m) { return m * (m - 1) / 2; }

std::size_t pair_index(std::size_t m, AltId a, AltId b) {
    check_id(a, m);
    check_id(b, m);
    if (a >= b) throw InputError("pair must satisfy a < b");
    const auto ua = static_cast<std::size_t>(a);
    // Pairs starting below `a` come first: sum_{i<a} (m-1-i).
    return ua * (2 * m - ua - 1) / 2 + static_cast<std::size_t>(b - a - 1);
}

std::vector<AltPair> pairs_of(std::size_t m) {
    if (m < 2) throw InputError("pairs_of needs at least two alternatives");
    std::vector<AltPair> pairs;
    pairs.reserve(pair_count(m));
    for (AltId a = 0; a < static_cast<AltId>(m); ++a) {
        for (AltId b = a + 1; b < static_cast<AltId>(m); ++b) pairs.push_back({a, b});
    }
    return pairs;
}

std::vector<AltPair> pairs_of(const Question& question) { return pairs_of(question.m()); }

}  // namespace spvote
