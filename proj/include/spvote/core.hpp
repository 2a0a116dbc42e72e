#pragma once

// Shared vocabulary: alternatives, rankings, elicitation formats, reports,
// questions and elections.

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spvote {

/// Raised for malformed caller input (bad ids, inconsistent formats, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using AltId = int;

struct Alternative {
    AltId id = 0;
    std::string label;
};

/// A total order over alternatives 0..m-1, best first.
class Ranking {
public:
    Ranking() = default;
    explicit Ranking(std::vector<AltId> order);

    static Ranking identity(std::size_t m);

    std::size_t size() const noexcept { return order_.size(); }
    AltId at(std::size_t position) const { return order_.at(position); }
    AltId top() const { return order_.at(0); }
    std::span<const AltId> order() const noexcept { return order_; }

    /// Zero-based position of `a`; throws InputError when `a` is not ranked.
    std::size_t position(AltId a) const;
    bool prefers(AltId a, AltId b) const;
    Ranking reversed() const;

    friend bool operator==(const Ranking& x, const Ranking& y) { return x.order_ == y.order_; }
    friend auto operator<=>(const Ranking& x, const Ranking& y) { return x.order_ <=> y.order_; }

private:
    std::vector<AltId> order_;
    std::vector<std::size_t> position_;
};

/// True iff `a` precedes `b` in `r`.
bool ranking_prefers(const Ranking& r, AltId a, AltId b);

enum class VoteKind { Top, Rank };
enum class PredictionKind { None, Top, Rank };

struct ElicitationFormat {
    VoteKind vote = VoteKind::Rank;
    PredictionKind prediction = PredictionKind::None;

    bool has_prediction() const noexcept { return prediction != PredictionKind::None; }
    friend auto operator<=>(const ElicitationFormat&, const ElicitationFormat&) = default;
};

/// Lower-case file token, e.g. "rank-top".
std::string to_token(ElicitationFormat format);
ElicitationFormat parse_format(std::string_view token);
/// The six legal formats in canonical order (top-none ... rank-rank).
std::array<ElicitationFormat, 6> all_formats();

struct TopChoice {
    AltId alt = 0;
    friend bool operator==(const TopChoice&, const TopChoice&) = default;
};
struct NoPrediction {
    friend bool operator==(const NoPrediction&, const NoPrediction&) = default;
};

using VoteReport = std::variant<TopChoice, Ranking>;
using PredictionReport = std::variant<NoPrediction, TopChoice, Ranking>;

struct ResponseRecord {
    std::string question_id;
    std::string voter_id;
    ElicitationFormat format;
    VoteReport vote;
    PredictionReport prediction;

    /// Checks tag consistency with `format` and that ids lie in 0..m-1.
    void validate(std::size_t m) const;
};

struct Question {
    std::string question_id;
    std::string domain;
    std::vector<Alternative> alternatives;
    std::optional<Ranking> ground_truth;

    std::size_t m() const noexcept { return alternatives.size(); }
    std::optional<AltId> find_label(std::string_view label) const;
    void validate() const;
};

/// Builds a question whose alternative ids follow the order of `labels`.
Question make_question(std::string question_id, std::string domain,
                       const std::vector<std::string>& labels,
                       std::optional<Ranking> ground_truth = std::nullopt);

struct Election {
    Question question;
    std::vector<ResponseRecord> responses;

    /// Nonempty, homogeneous question id, every response valid for the question.
    void validate() const;
    /// The single format shared by all responses; InputError when mixed or empty.
    ElicitationFormat format() const;
};

/// Splits a mixed-format election into one election per format, in canonical
/// format order.
std::vector<Election> split_by_format(const Election& election);

struct AltPair {
    AltId a = 0;
    AltId b = 1;
    friend bool operator==(const AltPair&, const AltPair&) = default;
};

std::size_t pair_count(std::size_t m);
/// Index of (a,b), a<b, in the lexicographic order produced by pairs_of.
std::size_t pair_index(std::size_t m, AltId a, AltId b);
std::vector<AltPair> pairs_of(std::size_t m);
std::vector<AltPair> pairs_of(const Question& question);

}  // namespace spvote
