#include "spvote/baselines.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <variant>

#include "spvote/tournament.hpp"

namespace spvote {

namespace {

using RankingMass = std::map<Ranking, double>;
using Order = std::vector<AltId>;
using OrderDist = std::vector<std::pair<Order, double>>;

std::vector<WeightedRanking> rankings_of(Rule rule, const Profile& p);

std::vector<WeightedRanking> to_vector(const RankingMass& mass) {
    std::vector<WeightedRanking> out;
    out.reserve(mass.size());
    for (const auto& [r, p] : mass) out.push_back({r, p});
    return out;
}

// Concatenation of independent orders.
OrderDist then(const OrderDist& head, const OrderDist& tail) {
    OrderDist out;
    out.reserve(head.size() * tail.size());
    for (const auto& [h, ph] : head) {
        for (const auto& [t, pt] : tail) {
            Order o = h;
            o.insert(o.end(), t.begin(), t.end());
            out.emplace_back(std::move(o), ph * pt);
        }
    }
    return out;
}

OrderDist uniform_orders(Order group) {
    std::sort(group.begin(), group.end());
    OrderDist out;
    do {
        out.emplace_back(group, 1.0);
    } while (std::next_permutation(group.begin(), group.end()));
    for (auto& [o, w] : out) w = 1.0 / static_cast<double>(out.size());
    return out;
}

// Order of `group` given by the rule applied to the profile restricted to it.
OrderDist refine(Rule rule, const Profile& p, const Order& group) {
    if (group.size() < 2) return {{group, 1.0}};
    std::vector<AltId> local(p.m(), -1);
    for (std::size_t i = 0; i < group.size(); ++i) local[group[i]] = static_cast<AltId>(i);
    std::vector<Ranking> restricted;
    restricted.reserve(p.voters());
    for (const auto& r : p.rankings()) {
        Order o;
        for (const AltId a : r.order()) {
            if (local[a] >= 0) o.push_back(local[a]);
        }
        restricted.emplace_back(std::move(o));
    }
    OrderDist out;
    for (const auto& wr : rankings_of(rule, Profile(std::move(restricted)))) {
        Order o;
        for (const AltId a : wr.ranking.order()) o.push_back(group[a]);
        out.emplace_back(std::move(o), wr.probability);
    }
    return out;
}

// `members` by descending score, each tied group refined.
OrderDist by_score(Rule rule, const Profile& p, const std::vector<double>& score, Order members) {
    std::stable_sort(members.begin(), members.end(),
                     [&](AltId x, AltId y) { return score[x] > score[y]; });
    OrderDist out{{{}, 1.0}};
    for (std::size_t i = 0; i < members.size();) {
        std::size_t j = i + 1;
        while (j < members.size() && score[members[j]] == score[members[i]]) ++j;
        out = then(out, refine(rule, p, Order(members.begin() + i, members.begin() + j)));
        i = j;
    }
    return out;
}

void add(RankingMass& mass, const OrderDist& d, double weight = 1.0) {
    for (const auto& [o, w] : d) mass[Ranking(o)] += weight * w;
}

// The top-score group is permuted uniformly; that is the winner tie-break.
std::vector<WeightedRanking> score_rankings(Rule rule, const Profile& p, const std::vector<double>& score) {
    const double best = *std::max_element(score.begin(), score.end());
    Order top;
    Order rest;
    for (AltId a = 0; a < static_cast<AltId>(score.size()); ++a) (score[a] == best ? top : rest).push_back(a);
    RankingMass mass;
    add(mass, then(uniform_orders(top), by_score(rule, p, score, rest)));
    return to_vector(mass);
}

std::vector<double> plurality_scores(const Profile& p) {
    std::vector<double> s(p.m(), 0.0);
    for (const auto& r : p.rankings()) s[r.top()] += 1.0;
    return s;
}

std::vector<double> borda_scores(const Profile& p) {
    std::vector<double> s(p.m(), 0.0);
    for (const auto& r : p.rankings()) {
        for (std::size_t pos = 0; pos < r.size(); ++pos) {
            s[r.at(pos)] += static_cast<double>(r.size() - 1 - pos);
        }
    }
    return s;
}

std::vector<double> copeland_rule_scores(const Profile& p) {
    std::vector<double> s(p.m(), 0.0);
    for (const auto& pr : pairs_of(p.m())) {
        const long long ab = p.support(pr.a, pr.b);
        const long long ba = p.support(pr.b, pr.a);
        if (ab > ba) {
            s[pr.a] += 1.0;
        } else if (ba > ab) {
            s[pr.b] += 1.0;
        } else {
            s[pr.a] += 0.5;
            s[pr.b] += 0.5;
        }
    }
    return s;
}

std::vector<double> maximin_scores(const Profile& p) {
    std::vector<double> s(p.m(), 0.0);
    for (AltId a = 0; a < static_cast<AltId>(p.m()); ++a) {
        long long worst = static_cast<long long>(p.voters());
        for (AltId b = 0; b < static_cast<AltId>(p.m()); ++b) {
            if (a != b) worst = std::min(worst, p.support(a, b));
        }
        s[a] = static_cast<double>(worst);
    }
    return s;
}

// Winner, runoff loser, then first-round losers by plurality score.
std::vector<WeightedRanking> runoff_rankings(const Profile& p) {
    if (p.m() < 2) throw InputError("plurality with runoff needs at least two alternatives");
    const auto score = plurality_scores(p);
    RankingMass mass;
    auto runoff = [&](AltId x, AltId y, double w) {
        Order rest;
        for (AltId a = 0; a < static_cast<AltId>(p.m()); ++a) {
            if (a != x && a != y) rest.push_back(a);
        }
        const auto tail = by_score(Rule::PluralityRunoff, p, score, rest);
        const long long margin = p.support(x, y) - p.support(y, x);
        if (margin >= 0) add(mass, then({{{x, y}, 1.0}}, tail), margin > 0 ? w : w / 2);
        if (margin <= 0) add(mass, then({{{y, x}, 1.0}}, tail), margin < 0 ? w : w / 2);
    };

    Order sorted(p.m());
    for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = static_cast<AltId>(i);
    std::stable_sort(sorted.begin(), sorted.end(), [&](AltId x, AltId y) { return score[x] > score[y]; });
    Order top;
    for (const AltId a : sorted) {
        if (score[a] == score[sorted[0]]) top.push_back(a);
    }
    if (top.size() >= 2) {
        const double w = 1.0 / static_cast<double>(top.size() * (top.size() - 1));
        for (const AltId x : top) {
            for (const AltId y : top) {
                if (x != y) runoff(x, y, w);
            }
        }
        return to_vector(mass);
    }

    const AltId x = top[0];
    Order second;
    for (const AltId a : sorted) {
        if (a != x && score[a] == score[sorted[1]]) second.push_back(a);
    }
    if (2 * score[x] > static_cast<double>(p.voters())) {
        // x wins any runoff, so the choice of opponent only orders the losers.
        for (const auto& [o, w] : refine(Rule::PluralityRunoff, p, second)) runoff(x, o[0], w);
    } else {
        for (const AltId y : second) runoff(x, y, 1.0 / static_cast<double>(second.size()));
    }
    return to_vector(mass);
}

void irv_branch(const Profile& p, Order remaining, Order eliminated, double weight, RankingMass& mass) {
    if (remaining.size() == 1) {
        Order r{remaining.front()};
        r.insert(r.end(), eliminated.rbegin(), eliminated.rend());
        mass[Ranking(std::move(r))] += weight;
        return;
    }
    std::vector<long long> firsts(p.m(), 0);
    for (const auto& r : p.rankings()) {
        for (const AltId a : r.order()) {
            if (std::find(remaining.begin(), remaining.end(), a) != remaining.end()) {
                ++firsts[a];
                break;
            }
        }
    }
    long long fewest = static_cast<long long>(p.voters()) + 1;
    for (const AltId a : remaining) fewest = std::min(fewest, firsts[a]);
    Order losers;
    Order kept;
    for (const AltId a : remaining) (firsts[a] == fewest ? losers : kept).push_back(a);

    if (fewest == 0 && losers.size() > 1) {
        // Dropping alternatives nobody ranks first moves no votes, so they go
        // together and their relative order comes from the restricted profile.
        for (const auto& [o, w] : refine(Rule::Irv, p, losers)) {
            auto gone = eliminated;
            gone.insert(gone.end(), o.rbegin(), o.rend());
            irv_branch(p, kept, std::move(gone), weight * w, mass);
        }
        return;
    }
    for (const AltId loser : losers) {
        Order next;
        for (const AltId a : remaining) {
            if (a != loser) next.push_back(a);
        }
        auto gone = eliminated;
        gone.push_back(loser);
        irv_branch(p, std::move(next), std::move(gone), weight / static_cast<double>(losers.size()), mass);
    }
}

std::vector<WeightedRanking> irv_rankings(const Profile& p) {
    RankingMass mass;
    Order all(p.m());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<AltId>(i);
    irv_branch(p, std::move(all), {}, 1.0, mass);
    return to_vector(mass);
}

std::vector<WeightedRanking> rankings_of(Rule rule, const Profile& p) {
    switch (rule) {
        case Rule::Plurality: return score_rankings(rule, p, plurality_scores(p));
        case Rule::PluralityRunoff: return runoff_rankings(p);
        case Rule::Borda: return score_rankings(rule, p, borda_scores(p));
        case Rule::Copeland: return score_rankings(rule, p, copeland_rule_scores(p));
        case Rule::Irv: return irv_rankings(p);
        case Rule::Maximin: return score_rankings(rule, p, maximin_scores(p));
    }
    throw InputError("unknown rule");
}

WinnerDistribution top_marginal(const std::vector<WeightedRanking>& rankings, std::size_t m) {
    WinnerDistribution d(m, 0.0);
    for (const auto& wr : rankings) d[wr.ranking.top()] += wr.probability;
    return d;
}

}  // namespace

Profile::Profile(std::vector<Ranking> rankings) : rankings_(std::move(rankings)) {
    if (rankings_.empty()) throw InputError("profile needs at least one ranking");
    const std::size_t m = rankings_.front().size();
    if (m < 1) throw InputError("profile rankings are empty");
    for (const auto& r : rankings_) {
        if (r.size() != m) throw InputError("profile rankings cover different alternative sets");
    }
}

long long Profile::support(AltId a, AltId b) const {
    long long n = 0;
    for (const auto& r : rankings_) n += r.prefers(a, b) ? 1 : 0;
    return n;
}

Profile profile_from(std::span<const Election> elections) {
    std::vector<Ranking> rankings;
    for (const auto& e : elections) {
        for (const auto& r : e.responses) {
            const auto* ranking = std::get_if<Ranking>(&r.vote);
            if (!ranking) {
                throw InputError("baseline rules need rank votes; got " + to_token(r.format));
            }
            rankings.push_back(*ranking);
        }
    }
    return Profile(std::move(rankings));
}

std::string_view rule_name(Rule rule) {
    switch (rule) {
        case Rule::Plurality: return "plurality";
        case Rule::PluralityRunoff: return "plurality_runoff";
        case Rule::Borda: return "borda";
        case Rule::Copeland: return "copeland";
        case Rule::Irv: return "irv";
        case Rule::Maximin: return "maximin";
    }
    return "unknown";
}

std::span<const Rule> all_rules() {
    static constexpr std::array<Rule, 6> rules{Rule::Plurality, Rule::PluralityRunoff, Rule::Borda,
                                               Rule::Copeland,  Rule::Irv,             Rule::Maximin};
    return rules;
}

std::vector<WeightedRanking> rule_rankings(Rule rule, const Profile& p) { return rankings_of(rule, p); }

WinnerDistribution winner_distribution(Rule rule, const Profile& p) {
    return top_marginal(rule_rankings(rule, p), p.m());
}

WinnerDistribution plurality(const Profile& p) { return winner_distribution(Rule::Plurality, p); }
WinnerDistribution plurality_runoff(const Profile& p) {
    return winner_distribution(Rule::PluralityRunoff, p);
}
WinnerDistribution borda(const Profile& p) { return winner_distribution(Rule::Borda, p); }
WinnerDistribution copeland_rule(const Profile& p) { return winner_distribution(Rule::Copeland, p); }
WinnerDistribution irv(const Profile& p) { return winner_distribution(Rule::Irv, p); }
WinnerDistribution maximin(const Profile& p) { return winner_distribution(Rule::Maximin, p); }

double baseline_kt(Rule rule, const Profile& p, const Ranking& truth) {
    if (truth.size() != p.m()) throw InputError("truth ranking does not match the profile");
    double kt = 0.0;
    for (const auto& wr : rule_rankings(rule, p)) kt += wr.probability * ranking_kt(wr.ranking, truth);
    return kt;
}

double baseline_top_error(Rule rule, const Profile& p, const Ranking& truth) {
    if (truth.size() != p.m()) throw InputError("truth ranking does not match the profile");
    return 1.0 - winner_distribution(rule, p)[truth.top()];
}

std::optional<AltId> condorcet_winner(const Profile& p) {
    for (AltId a = 0; a < static_cast<AltId>(p.m()); ++a) {
        bool beats_all = true;
        for (AltId b = 0; b < static_cast<AltId>(p.m()) && beats_all; ++b) {
            if (a != b && p.support(a, b) <= p.support(b, a)) beats_all = false;
        }
        if (beats_all) return a;
    }
    return std::nullopt;
}

}  // namespace spvote
