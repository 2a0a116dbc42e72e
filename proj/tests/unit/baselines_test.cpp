#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "spvote/baselines.hpp"
#include "spvote/random.hpp"
#include "spvote/tournament.hpp"

using namespace spvote;

namespace {

Profile profile(std::initializer_list<std::pair<std::vector<AltId>, int>> groups) {
    std::vector<Ranking> rs;
    for (const auto& [order, count] : groups) {
        for (int i = 0; i < count; ++i) rs.emplace_back(order);
    }
    return Profile(std::move(rs));
}

Ranking random_ranking(std::size_t m, Rng& rng) {
    std::vector<AltId> order(m);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    return Ranking(order);
}

Profile random_profile(std::size_t m, std::size_t n, Rng& rng) {
    std::vector<Ranking> rs;
    for (std::size_t i = 0; i < n; ++i) rs.push_back(random_ranking(m, rng));
    return Profile(std::move(rs));
}

void expect_dist(const WinnerDistribution& got, const std::vector<double>& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << "alternative " << i;
}

// 4 x a>b>c, 3 x b>a>c, 2 x c>b>a.
Profile runoff_profile() { return profile({{{0, 1, 2}, 4}, {{1, 0, 2}, 3}, {{2, 1, 0}, 2}}); }

Profile cycle_profile() { return profile({{{0, 1, 2}, 1}, {{1, 2, 0}, 1}, {{2, 0, 1}, 1}}); }

}  // namespace

TEST(Profile, Validation) {
    EXPECT_THROW(Profile({}), InputError);
    EXPECT_THROW(Profile({Ranking::identity(3), Ranking::identity(4)}), InputError);
    const auto p = runoff_profile();
    EXPECT_EQ(p.support(0, 1), 4);
    EXPECT_EQ(p.support(1, 0), 5);
}

TEST(Profile, FromElections) {
    const auto q = spvote::testing::abcd();
    const auto e1 = spvote::testing::rank_election(q, {{0, 1, 2, 3}, {1, 0, 2, 3}});
    const auto e2 = spvote::testing::rank_election(q, {{3, 2, 1, 0}}, {{0, 1, 2, 3}});
    const std::vector<Election> both{e1, e2};
    EXPECT_EQ(profile_from(both).voters(), 3u);
    const std::vector<Election> top{spvote::testing::top_election(q, {0})};
    EXPECT_THROW(profile_from(top), InputError);
}

TEST(Plurality, Examples) {
    expect_dist(plurality(profile({{{0, 1, 2}, 3}, {{1, 0, 2}, 1}})), {1, 0, 0});
    expect_dist(plurality(profile({{{0, 1, 2}, 2}, {{1, 0, 2}, 2}})), {0.5, 0.5, 0});
    expect_dist(plurality(profile({{{2, 0, 1}, 5}})), {0, 0, 1});
}

TEST(PluralityRunoff, Examples) {
    expect_dist(plurality_runoff(profile({{{0, 1}, 2}, {{1, 0}, 3}})), {0, 1});
    expect_dist(plurality_runoff(runoff_profile()), {0, 1, 0});
    expect_dist(plurality_runoff(profile({{{1, 2, 0, 3}, 4}})), {0, 1, 0, 0});
}

TEST(Borda, Examples) {
    expect_dist(borda(profile({{{3, 1, 0, 2}, 3}})), {0, 0, 0, 1});
    expect_dist(borda(profile({{{0, 1, 2}, 1}, {{2, 1, 0}, 1}})), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    expect_dist(borda(profile({{{1, 0, 2}, 1}})), {0, 1, 0});
}

TEST(CopelandRule, Examples) {
    expect_dist(copeland_rule(runoff_profile()), {0, 1, 0});
    expect_dist(copeland_rule(cycle_profile()), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    expect_dist(copeland_rule(profile({{{2, 1, 0}, 2}})), {0, 0, 1});
    // A pair tie gives half a point to each side: 0 and 1 tie, both beat 2.
    expect_dist(copeland_rule(profile({{{0, 1, 2}, 1}, {{1, 0, 2}, 1}})), {0.5, 0.5, 0});
}

TEST(Irv, Examples) {
    expect_dist(irv(profile({{{0, 1}, 3}, {{1, 0}, 2}})), {1, 0});
    expect_dist(irv(runoff_profile()), {0, 1, 0});
    expect_dist(irv(profile({{{1, 2, 0, 3}, 4}})), {0, 1, 0, 0});
    // Three-way first-place tie: each elimination branch is equally likely.
    expect_dist(irv(cycle_profile()), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST(Maximin, Examples) {
    expect_dist(maximin(runoff_profile()), {0, 1, 0});
    expect_dist(maximin(cycle_profile()), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    expect_dist(maximin(profile({{{2, 0, 1}, 1}})), {0, 0, 1});
}

TEST(BaselineKt, Examples) {
    const Ranking truth = Ranking::identity(4);
    const auto correct = profile({{{0, 1, 2, 3}, 5}});
    for (const Rule rule : all_rules()) {
        EXPECT_NEAR(baseline_kt(rule, correct, truth), 0.0, 1e-12) << rule_name(rule);
        EXPECT_NEAR(baseline_top_error(rule, correct, truth), 0.0, 1e-12) << rule_name(rule);
    }
    EXPECT_NEAR(baseline_kt(Rule::Borda, profile({{{3, 2, 1, 0}, 5}}), truth), 6.0, 1e-12);

    // 3-cycle under Copeland: all six orders equally likely.
    std::vector<AltId> order{0, 1, 2};
    double mean = 0.0;
    do {
        mean += ranking_kt(Ranking(order), Ranking({1, 2, 0})) / 6.0;
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_NEAR(baseline_kt(Rule::Copeland, cycle_profile(), Ranking({1, 2, 0})), mean, 1e-12);
    EXPECT_NEAR(mean, 1.5, 1e-12);
}

TEST(RuleRankings, TopMarginalMatchesWinners) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_profile(2 + rng.index(4), 1 + rng.index(7), rng);
        for (const Rule rule : all_rules()) {
            const auto ranks = rule_rankings(rule, p);
            std::vector<double> top(p.m(), 0.0);
            double total = 0.0;
            for (const auto& wr : ranks) {
                top[wr.ranking.top()] += wr.probability;
                total += wr.probability;
            }
            EXPECT_NEAR(total, 1.0, 1e-9) << rule_name(rule);
            const auto w = winner_distribution(rule, p);
            for (std::size_t a = 0; a < p.m(); ++a) EXPECT_NEAR(top[a], w[a], 1e-9) << rule_name(rule);
        }
    }
}

TEST(BaselineProperties, AnonymityNeutralityUnanimity) {
    Rng rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 2 + rng.index(4);
        const std::size_t n = 1 + rng.index(8);
        const auto p = random_profile(m, n, rng);

        std::vector<Ranking> shuffled(p.rankings().begin(), p.rankings().end());
        for (std::size_t i = n; i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
        const Profile ps(shuffled);

        const auto perm = random_ranking(m, rng);
        std::vector<Ranking> relabeled;
        for (const auto& r : p.rankings()) {
            std::vector<AltId> o;
            for (const AltId a : r.order()) o.push_back(perm.at(a));
            relabeled.emplace_back(o);
        }
        const Profile pr(relabeled);
        const auto truth = random_ranking(m, rng);
        std::vector<AltId> truth_p;
        for (const AltId a : truth.order()) truth_p.push_back(perm.at(a));

        for (const Rule rule : all_rules()) {
            const auto w = winner_distribution(rule, p);
            const auto ws = winner_distribution(rule, ps);
            const auto wr = winner_distribution(rule, pr);
            for (std::size_t a = 0; a < m; ++a) {
                EXPECT_NEAR(w[a], ws[a], 1e-12) << rule_name(rule);
                EXPECT_NEAR(w[a], wr[perm.at(static_cast<AltId>(a))], 1e-12) << rule_name(rule);
            }
            EXPECT_NEAR(baseline_kt(rule, p, truth), baseline_kt(rule, pr, Ranking(truth_p)), 1e-9)
                << rule_name(rule);
        }

        const Profile unanimous(std::vector<Ranking>(n, truth));
        for (const Rule rule : all_rules()) {
            EXPECT_NEAR(winner_distribution(rule, unanimous)[truth.top()], 1.0, 1e-12) << rule_name(rule);
            EXPECT_NEAR(baseline_kt(rule, unanimous, truth), 0.0, 1e-12) << rule_name(rule);
        }
    }
}

TEST(CondorcetWinner, ElectedByCopelandAndMaximin) {
    Rng rng(23);
    int found = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_profile(3 + rng.index(3), 1 + rng.index(9), rng);
        const auto cw = condorcet_winner(p);
        if (!cw) continue;
        ++found;
        EXPECT_NEAR(copeland_rule(p)[*cw], 1.0, 1e-12);
        EXPECT_NEAR(maximin(p)[*cw], 1.0, 1e-12);
    }
    EXPECT_GT(found, 50);
    EXPECT_FALSE(condorcet_winner(cycle_profile()));
    EXPECT_EQ(condorcet_winner(runoff_profile()), 1);
}

TEST(RuleNames, Six) {
    EXPECT_EQ(all_rules().size(), 6u);
    EXPECT_EQ(rule_name(Rule::PluralityRunoff), "plurality_runoff");
    EXPECT_EQ(rule_name(Rule::Irv), "irv");
}
