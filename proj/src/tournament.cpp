#include "spvote/tournament.hpp"

#include <algorithm>

#include "spvote/random.hpp"

namespace spvote {

namespace {

void require_complete(const Tournament& t) {
    if (!t.complete()) throw InputError("tournament is incomplete");
}

void require_same_size(const Tournament& t, const Ranking& truth) {
    if (truth.size() != t.m()) throw InputError("truth ranking does not match tournament size");
}

// Coin edges re-oriented by the bits of `mask`.
Tournament with_coins(const Tournament& t, const std::vector<AltPair>& coins, std::uint64_t mask) {
    Tournament out = t;
    for (std::size_t i = 0; i < coins.size(); ++i) {
        const auto& p = coins[i];
        if ((mask >> i) & 1U) {
            out.set(p.a, p.b, true);
        } else {
            out.set(p.b, p.a, true);
        }
    }
    return out;
}

constexpr std::size_t kMaxEnumeratedCoins = 20;

}  // namespace

std::vector<int> copeland_scores(const Tournament& t) {
    require_complete(t);
    std::vector<int> score(t.m(), 0);
    for (const auto& p : pairs_of(t.m())) ++score[t.beats(p.a, p.b) ? p.a : p.b];
    return score;
}

TopSelection select_top(const Tournament& t) {
    const auto score = copeland_scores(t);
    const int best = *std::max_element(score.begin(), score.end());
    TopSelection sel;
    for (std::size_t a = 0; a < score.size(); ++a) {
        if (score[a] == best) sel.winners.push_back(static_cast<AltId>(a));
    }
    sel.probability.assign(t.m(), 0.0);
    for (const AltId a : sel.winners) sel.probability[a] = 1.0 / static_cast<double>(sel.winners.size());
    return sel;
}

double top_error(const Tournament& t, const Ranking& truth) {
    require_same_size(t, truth);
    return 1.0 - select_top(t).probability[truth.top()];
}

int kt_distance(const Tournament& t, const Ranking& truth) {
    require_same_size(t, truth);
    require_complete(t);
    int d = 0;
    for (const auto& p : pairs_of(t.m())) {
        if (t.beats(p.a, p.b) != truth.prefers(p.a, p.b)) ++d;
    }
    return d;
}

int ranking_kt(const Ranking& r1, const Ranking& r2) {
    if (r1.size() != r2.size()) throw InputError("rankings cover different alternative sets");
    int d = 0;
    for (const auto& p : pairs_of(r1.size())) {
        if (r1.prefers(p.a, p.b) != r2.prefers(p.a, p.b)) ++d;
    }
    return d;
}

std::optional<Ranking> induced_ranking(const Tournament& t) {
    const auto score = copeland_scores(t);
    std::vector<AltId> order(t.m());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<AltId>(i);
    std::sort(order.begin(), order.end(), [&](AltId x, AltId y) { return score[x] > score[y]; });
    // Transitive exactly when the scores are m-1, m-2, ..., 0.
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (score[order[i]] != static_cast<int>(order.size() - 1 - i)) return std::nullopt;
    }
    return Ranking(std::move(order));
}

double expected_top_error(const Tournament& t, const Ranking& truth) {
    require_same_size(t, truth);
    require_complete(t);
    const auto coins = t.coin_pairs();
    if (coins.size() > kMaxEnumeratedCoins) {
        throw InputError("too many coin-resolved pairs to enumerate exactly");
    }
    const std::uint64_t total = std::uint64_t{1} << coins.size();
    double err = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        err += top_error(with_coins(t, coins, mask), truth);
    }
    return err / static_cast<double>(total);
}

double expected_kt_distance(const Tournament& t, const Ranking& truth) {
    require_same_size(t, truth);
    require_complete(t);
    double d = 0.0;
    for (const auto& p : pairs_of(t.m())) {
        if (t.coin_resolved(p.a, p.b)) {
            d += 0.5;
        } else if (t.beats(p.a, p.b) != truth.prefers(p.a, p.b)) {
            d += 1.0;
        }
    }
    return d;
}

double sampled_top_error(const Tournament& t, const Ranking& truth, int samples, std::uint64_t seed) {
    require_same_size(t, truth);
    if (samples < 1) throw InputError("sampled metrics need at least one sample");
    const auto coins = t.coin_pairs();
    Rng rng(seed);
    int wrong = 0;
    for (int s = 0; s < samples; ++s) {
        Tournament draw = t;
        for (const auto& p : coins) {
            if (rng.coin()) {
                draw.set(p.a, p.b, true);
            } else {
                draw.set(p.b, p.a, true);
            }
        }
        const auto sel = select_top(draw);
        if (sel.winners[rng.index(sel.winners.size())] != truth.top()) ++wrong;
    }
    return static_cast<double>(wrong) / samples;
}

double sampled_kt_distance(const Tournament& t, const Ranking& truth, int samples,
                           std::uint64_t seed) {
    require_same_size(t, truth);
    require_complete(t);
    if (samples < 1) throw InputError("sampled metrics need at least one sample");
    Rng rng(seed);
    long long total = 0;
    for (int s = 0; s < samples; ++s) {
        for (const auto& p : pairs_of(t.m())) {
            const bool a_wins = t.coin_resolved(p.a, p.b) ? rng.coin() : t.beats(p.a, p.b);
            if (a_wins != truth.prefers(p.a, p.b)) ++total;
        }
    }
    return static_cast<double>(total) / samples;
}

}  // namespace spvote
