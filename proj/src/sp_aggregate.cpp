#include "spvote/sp_aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "spvote/random.hpp"

namespace spvote {

namespace {

bool within_tie(double x, double y) {
    return std::abs(x - y) <= kTieTolerance * std::max(std::abs(x), std::abs(y));
}

void require_format(const Election& election, ElicitationFormat expected) {
    election.validate();
    const auto f = election.format();
    if (f != expected) {
        throw InputError("expected a " + to_token(expected) + " election, got " + to_token(f));
    }
}

void settle(Tournament& t, AltPair pair, long long margin, std::uint64_t seed) {
    if (margin > 0) {
        t.set(pair.a, pair.b);
    } else if (margin < 0) {
        t.set(pair.b, pair.a);
    } else {
        Rng rng(seed);
        if (rng.coin()) {
            t.set(pair.a, pair.b, true);
        } else {
            t.set(pair.b, pair.a, true);
        }
    }
}

}  // namespace

PairDecision sp_pair_decision(std::span<const PairwiseReport> reports, std::uint64_t rng_seed,
                              AltPair pair, SpMode mode) {
    if (reports.empty()) throw NoEvidenceError("no pairwise reports survived for the pair");

    PairDecision d;
    d.pair = pair;
    double sum_q1 = 0.0;
    double sum_q0 = 0.0;
    for (const auto& rep : reports) {
        if (!(rep.q > 0.0 && rep.q < 1.0)) {
            throw InputError("pairwise prediction must lie in (0,1)");
        }
        if (rep.r == 1) {
            ++d.n_ab;
            sum_q1 += rep.q;
        } else if (rep.r == 0) {
            ++d.n_ba;
            sum_q0 += rep.q;
        } else {
            throw InputError("pairwise vote must be 0 or 1");
        }
    }
    d.f_ab = static_cast<double>(d.n_ab) / static_cast<double>(d.n_ab + d.n_ba);
    const double f_ba = 1.0 - d.f_ab;
    if (d.n_ab > 0) d.g11 = sum_q1 / static_cast<double>(d.n_ab);
    if (d.n_ba > 0) d.g10 = sum_q0 / static_cast<double>(d.n_ba);

    // g(x|y): x is the other voter's signal, y the reporting voter's signal.
    const auto g = [&](int x, int y) {
        const double p1 = y == 1 ? *d.g11 : *d.g10;
        return x == 1 ? p1 : 1.0 - p1;
    };

    if (d.n_ba == 0) {
        // Only a>b survives; the opposing frequency is zero.
        d.v_ab = mode == SpMode::PerVoter ? d.f_ab * static_cast<double>(d.n_ab) : d.f_ab;
        d.v_ba = 0.0;
    } else if (d.n_ab == 0) {
        d.v_ab = 0.0;
        d.v_ba = mode == SpMode::PerVoter ? f_ba * static_cast<double>(d.n_ba) : f_ba;
    } else if (mode == SpMode::PerVoter) {
        double s_ab = 0.0;
        double s_ba = 0.0;
        for (const auto& rep : reports) {
            s_ab += g(rep.r, 1) / g(1, rep.r);
            s_ba += g(rep.r, 0) / g(0, rep.r);
        }
        d.v_ab = d.f_ab * s_ab;
        d.v_ba = f_ba * s_ba;
    } else {
        d.v_ab = d.f_ab * (g(1, 1) / g(1, 1) + g(0, 1) / g(1, 0));
        d.v_ba = f_ba * (g(1, 0) / g(0, 1) + g(0, 0) / g(0, 0));
    }

    if (within_tie(d.v_ab, d.v_ba)) {
        d.outcome = PairOutcome::Tie;
        Rng rng(rng_seed);
        d.a_wins = rng.coin();
    } else {
        d.a_wins = d.v_ab > d.v_ba;
        d.outcome = d.a_wins ? PairOutcome::AOverB : PairOutcome::BOverA;
    }
    return d;
}

Tournament::Tournament(std::size_t m) : m_(m), first_wins_(pair_count(m), -1), coin_(pair_count(m), 0) {
    if (m < 2) throw InputError("a tournament needs at least two alternatives");
}

Tournament Tournament::from_ranking(const Ranking& ranking) {
    Tournament t(ranking.size());
    for (const auto& p : pairs_of(ranking.size())) {
        if (ranking.prefers(p.a, p.b)) {
            t.set(p.a, p.b);
        } else {
            t.set(p.b, p.a);
        }
    }
    return t;
}

std::size_t Tournament::slot(AltId a, AltId b) const {
    if (a == b) throw InputError("tournament edge needs two distinct alternatives");
    return a < b ? pair_index(m_, a, b) : pair_index(m_, b, a);
}

void Tournament::set(AltId winner, AltId loser, bool coin) {
    const auto s = slot(winner, loser);
    first_wins_[s] = winner < loser ? 1 : 0;
    coin_[s] = coin ? 1 : 0;
}

bool Tournament::has_edge(AltId a, AltId b) const { return first_wins_[slot(a, b)] >= 0; }

bool Tournament::beats(AltId a, AltId b) const {
    const auto v = first_wins_[slot(a, b)];
    if (v < 0) throw InputError("tournament has no edge between the pair");
    return (v == 1) == (a < b);
}

bool Tournament::coin_resolved(AltId a, AltId b) const { return coin_[slot(a, b)] != 0; }

bool Tournament::complete() const noexcept {
    return m_ >= 2 && std::none_of(first_wins_.begin(), first_wins_.end(),
                                   [](signed char v) { return v < 0; });
}

std::vector<AltPair> Tournament::coin_pairs() const {
    std::vector<AltPair> out;
    for (const auto& p : pairs_of(m_)) {
        if (coin_[pair_index(m_, p.a, p.b)] != 0) out.push_back(p);
    }
    return out;
}

std::vector<PairDecision> pair_decisions(const Election& election, const ExtractionParams& params,
                                         std::uint64_t rng_seed, SpMode mode) {
    election.validate();
    if (!election.format().has_prediction()) {
        throw InputError("SP aggregation needs predictions; use the fallback for " +
                         to_token(election.format()));
    }
    params.validate();
    const std::size_t m = election.question.m();
    std::vector<PairDecision> out;
    for (const auto& p : pairs_of(m)) {
        const auto reports = extract_reports(election, p, params);
        if (reports.empty()) continue;
        out.push_back(sp_pair_decision(reports, derive_seed(rng_seed, {pair_index(m, p.a, p.b)}), p,
                                       mode));
    }
    return out;
}

Tournament aggregate_election(const Election& election, const ExtractionParams& params,
                              std::uint64_t rng_seed, SpMode mode) {
    const std::size_t m = election.question.m();
    Tournament t(m);
    for (const auto& d : pair_decisions(election, params, rng_seed, mode)) {
        const bool coin = d.outcome == PairOutcome::Tie;
        if (d.a_wins) {
            t.set(d.pair.a, d.pair.b, coin);
        } else {
            t.set(d.pair.b, d.pair.a, coin);
        }
    }
    for (const auto& p : pairs_of(m)) {
        if (!t.has_edge(p.a, p.b)) settle(t, p, 0, derive_seed(rng_seed, {pair_index(m, p.a, p.b)}));
    }
    return t;
}

Tournament fallback_top_none(const Election& election, std::uint64_t rng_seed) {
    require_format(election, {VoteKind::Top, PredictionKind::None});
    const std::size_t m = election.question.m();
    std::vector<long long> score(m, 0);
    for (const auto& r : election.responses) ++score[std::get<TopChoice>(r.vote).alt];
    Tournament t(m);
    for (const auto& p : pairs_of(m)) {
        settle(t, p, score[p.a] - score[p.b], derive_seed(rng_seed, {pair_index(m, p.a, p.b)}));
    }
    return t;
}

Tournament fallback_rank_none(const Election& election, std::uint64_t rng_seed) {
    require_format(election, {VoteKind::Rank, PredictionKind::None});
    const std::size_t m = election.question.m();
    Tournament t(m);
    for (const auto& p : pairs_of(m)) {
        long long margin = 0;
        for (const auto& r : election.responses) {
            margin += std::get<Ranking>(r.vote).prefers(p.a, p.b) ? 1 : -1;
        }
        settle(t, p, margin, derive_seed(rng_seed, {pair_index(m, p.a, p.b)}));
    }
    return t;
}

Tournament aggregate(const Election& election, const ExtractionParams& params,
                     std::uint64_t rng_seed, SpMode mode) {
    const auto f = election.format();
    if (f.has_prediction()) return aggregate_election(election, params, rng_seed, mode);
    if (f.vote == VoteKind::Top) return fallback_top_none(election, rng_seed);
    return fallback_rank_none(election, rng_seed);
}

}  // namespace spvote
