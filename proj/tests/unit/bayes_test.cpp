#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "helpers.hpp"
#include "spvote/bayes.hpp"
#include "spvote/tournament.hpp"

using namespace spvote;

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Diagonal 1 - eps, the rest spread evenly.
WorldModel near_deterministic(std::size_t m, double eps) {
    const RankingSpace space(m);
    const std::size_t k = space.size();
    std::vector<std::vector<double>> signal(k, std::vector<double>(k, eps / static_cast<double>(k - 1)));
    for (std::size_t i = 0; i < k; ++i) signal[i][i] = 1.0 - eps;
    return WorldModel::explicit_table(m, uniform_prior(m), signal);
}

}  // namespace

TEST(RankingSpace, LexicographicIndex) {
    const RankingSpace space(4);
    EXPECT_EQ(space.size(), 24u);
    EXPECT_EQ(space.at(0), Ranking::identity(4));
    EXPECT_EQ(space.at(23), Ranking::identity(4).reversed());
    for (std::size_t i = 0; i < space.size(); ++i) {
        EXPECT_EQ(space.index_of(space.at(i)), i);
        if (i > 0) EXPECT_LT(space.at(i - 1), space.at(i));
    }
    EXPECT_THROW(RankingSpace(7), InputError);
    EXPECT_NO_THROW(RankingSpace(7, 7));
    EXPECT_THROW(RankingSpace(1), InputError);
    EXPECT_THROW(space.index_of(Ranking::identity(3)), InputError);
}

TEST(Mallows, NormalizerMatchesEnumeration) {
    for (std::size_t m = 2; m <= 6; ++m) {
        const RankingSpace space(m);
        for (const double phi : {0.1, 0.35, 0.5, 0.8, 1.0}) {
            double z = 0.0;
            for (const auto& r : space.rankings()) z += std::pow(phi, ranking_kt(r, Ranking::identity(m)));
            EXPECT_NEAR(mallows_normalizer(m, phi), z, 1e-9 * z) << m << ' ' << phi;
        }
    }
    EXPECT_THROW(mallows_normalizer(4, 0.0), InputError);
    EXPECT_THROW(mallows_normalizer(4, -0.2), InputError);
    EXPECT_THROW(mallows_normalizer(4, 1.5), InputError);
}

TEST(Mallows, PmfExamples) {
    const RankingSpace s4(4);
    for (const double p : mallows_pmf(s4, Ranking({2, 0, 3, 1}), 1.0)) EXPECT_NEAR(p, 1.0 / 24.0, 1e-15);

    const auto peaked = mallows_pmf(s4, Ranking({2, 0, 3, 1}), 1e-9);
    EXPECT_NEAR(peaked[s4.index_of(Ranking({2, 0, 3, 1}))], 1.0, 1e-8);

    // m = 3 KT distances from the identity: 0, 1, 1, 2, 2, 3.
    const RankingSpace s3(3);
    auto pmf = mallows_pmf(s3, Ranking::identity(3), 0.5);
    EXPECT_NEAR(sum(pmf), 1.0, 1e-12);
    std::sort(pmf.rbegin(), pmf.rend());
    const double z = 1 + 0.5 + 0.5 + 0.25 + 0.25 + 0.125;
    const std::vector<double> want{1 / z, 0.5 / z, 0.5 / z, 0.25 / z, 0.25 / z, 0.125 / z};
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(pmf[i], want[i], 1e-12);
}

TEST(Posterior, Examples) {
    const auto flat = WorldModel::mallows(4, 1.0);
    for (const double p : posterior(flat, Ranking({3, 1, 2, 0}))) EXPECT_NEAR(p, 1.0 / 24.0, 1e-12);

    const auto sharp = near_deterministic(3, 0.05);
    const auto post = posterior(sharp, Ranking({1, 2, 0}));
    const auto best = std::max_element(post.begin(), post.end()) - post.begin();
    EXPECT_EQ(sharp.space().at(static_cast<std::size_t>(best)), Ranking({1, 2, 0}));

    // Uniform prior: the posterior is the likelihood column, normalized.
    const auto w = WorldModel::mallows(3, 0.5);
    const Ranking obs = Ranking::identity(3);
    std::vector<double> expect;
    for (const auto& pi : w.space().rankings()) expect.push_back(std::pow(0.5, ranking_kt(obs, pi)));
    const double z = sum(expect);
    const auto got = posterior(w, obs);
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(got[i], expect[i] / z, 1e-12);
}

TEST(Posterior, ConsistencyRecoversPrior) {
    const auto world = WorldModel::mallows(4, 0.6, mallows_prior(4, 0.7, Ranking({1, 3, 0, 2})));
    const std::size_t k = world.space().size();
    std::vector<double> marginal(k, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t s = 0; s < k; ++s) marginal[s] += world.prior()[t] * world.signal_row(t)[s];
    }
    for (std::size_t t = 0; t < k; ++t) {
        double back = 0.0;
        for (std::size_t s = 0; s < k; ++s) back += world.posterior_row(s)[t] * marginal[s];
        EXPECT_NEAR(back, world.prior()[t], 1e-12);
    }
}

TEST(OtherVote, Examples) {
    const auto flat = WorldModel::mallows(4, 1.0);
    for (const double p : other_vote_distribution(flat, Ranking::identity(4))) EXPECT_NEAR(p, 1.0 / 24.0, 1e-12);

    const auto sharp = near_deterministic(3, 0.03);
    const auto o = other_vote_distribution(sharp, Ranking({2, 1, 0}));
    EXPECT_GT(o[sharp.space().index_of(Ranking({2, 1, 0}))], 0.9);

    const auto world = WorldModel::mallows(4, 0.4, mallows_prior(4, 0.5));
    for (std::size_t s = 0; s < world.space().size(); ++s) {
        EXPECT_NEAR(sum(world.other_vote_row(s)), 1.0, 1e-12);
        EXPECT_NEAR(sum(world.posterior_row(s)), 1.0, 1e-12);
        EXPECT_NEAR(sum(world.top_mass(s)), 1.0, 1e-12);
        for (const double p : world.other_vote_row(s)) EXPECT_GT(p, 0.0);
        for (const auto& p : pairs_of(4)) {
            EXPECT_NEAR(world.pairwise_prediction(s, p) + world.pairwise_prediction(s, {p.b, p.a}), 1.0, 1e-12);
        }
    }
    const auto belief = voter_belief(world, Ranking({0, 2, 1, 3}));
    EXPECT_EQ(belief.posterior, posterior(world, Ranking({0, 2, 1, 3})));
}

TEST(WorldModel, Validation) {
    EXPECT_THROW(WorldModel::mallows(4, 0.0), InputError);
    EXPECT_THROW(WorldModel::mallows(4, 0.5, std::vector<double>(24, 0.5)), InputError);
    std::vector<double> prior(24, 1.0 / 24.0);
    prior[0] = 0.0;
    prior[1] = 2.0 / 24.0;
    EXPECT_THROW(WorldModel::mallows(4, 0.5, prior), InputError);
    EXPECT_THROW(WorldModel::explicit_table(2, {0.5, 0.5}, {{0.5, 0.5}}), InputError);
    EXPECT_THROW(WorldModel::explicit_table(2, {0.5, 0.5}, {{0.6, 0.6}, {0.5, 0.5}}), InputError);
    EXPECT_THROW(WorldModel::mallows(7, 0.5), InputError);
}

TEST(WorldModel, RelabelingMapsBeliefs) {
    const auto world = WorldModel::mallows(3, 0.5, mallows_prior(3, 0.4));
    const Ranking relabel({2, 0, 1});
    const auto moved = world.relabeled(relabel);
    const auto map = [&](const Ranking& r) {
        std::vector<AltId> o;
        for (const AltId a : r.order()) o.push_back(relabel.at(a));
        return Ranking(o);
    };
    for (const auto& s : world.space().rankings()) {
        const auto before = posterior(world, s);
        const auto after = posterior(moved, map(s));
        for (std::size_t t = 0; t < before.size(); ++t) {
            EXPECT_NEAR(before[t], after[moved.space().index_of(map(world.space().at(t)))], 1e-12);
        }
    }
}

TEST(GenerateResponse, Formats) {
    const auto world = WorldModel::mallows(4, 0.5);
    const Ranking truth({1, 0, 2, 3});
    for (const auto f : all_formats()) {
        const auto r = generate_response(world, truth, f, 7);
        EXPECT_NO_THROW(r.validate(4));
        EXPECT_EQ(std::holds_alternative<NoPrediction>(r.prediction), !f.has_prediction());
        const auto again = generate_response(world, truth, f, 7);
        EXPECT_EQ(again.vote, r.vote);
        EXPECT_EQ(again.prediction, r.prediction);
    }
}

TEST(GenerateResponse, ConcentratedWorldReportsTruth) {
    const auto world = near_deterministic(4, 1e-6);
    const Ranking truth({3, 0, 2, 1});
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto rr = generate_response(world, truth, parse_format("rank-rank"), seed);
        const auto tt = generate_response(world, truth, parse_format("top-top"), seed);
        if (std::get<Ranking>(rr.vote) == truth && std::get<Ranking>(rr.prediction) == truth &&
            std::get<TopChoice>(tt.vote).alt == 3 && std::get<TopChoice>(tt.prediction).alt == 3) {
            ++hits;
        }
    }
    EXPECT_EQ(hits, 50);
}

TEST(GenerateResponse, UninformativeTopPredictionIsUniform) {
    const auto world = WorldModel::mallows(4, 1.0);
    std::vector<int> counts(4, 0);
    const int n = 4000;
    for (int seed = 0; seed < n; ++seed) {
        const auto r = generate_response(world, Ranking::identity(4), parse_format("rank-top"), seed);
        ++counts[std::get<TopChoice>(r.prediction).alt];
    }
    // Binomial(4000, 1/4): sd ~ 27.4; allow 4 sd.
    for (const int c : counts) EXPECT_NEAR(c, n / 4, 110);
}

TEST(GenerateResponse, TopRankPredictionOrdersByTopMass) {
    const auto world = WorldModel::mallows(4, 0.3, mallows_prior(4, 0.5));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto r = generate_response(world, Ranking({0, 2, 1, 3}), parse_format("top-rank"), seed);
        const auto& pred = std::get<Ranking>(r.prediction);
        // Recover the observation from the top vote is not possible, so check
        // monotonicity against every observation whose top matches.
        bool consistent = false;
        for (std::size_t s = 0; s < world.space().size(); ++s) {
            if (world.space().at(s).top() != std::get<TopChoice>(r.vote).alt) continue;
            const auto mass = world.top_mass(s);
            bool ok = true;
            for (std::size_t i = 1; i < 4; ++i) ok = ok && mass[pred.at(i - 1)] >= mass[pred.at(i)] - 1e-12;
            consistent = consistent || ok;
        }
        EXPECT_TRUE(consistent);
    }
}

TEST(GenerateElection, WellFormedAndDeterministic) {
    const auto world = WorldModel::mallows(4, 0.5);
    const auto q = spvote::testing::abcd(Ranking({2, 3, 0, 1}));
    const auto e = generate_election(world, q, parse_format("rank-rank"), 20, 9);
    ASSERT_EQ(e.responses.size(), 20u);
    EXPECT_NO_THROW(e.validate());
    EXPECT_EQ(e.responses.front().voter_id, "v001");
    const auto again = generate_election(world, q, parse_format("rank-rank"), 20, 9);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(e.responses[i].vote, again.responses[i].vote);
        EXPECT_EQ(e.responses[i].prediction, again.responses[i].prediction);
    }
    // Observations are shared across formats for one seed.
    const auto top = generate_election(world, q, parse_format("top-none"), 20, 9);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(std::get<TopChoice>(top.responses[i].vote).alt, std::get<Ranking>(e.responses[i].vote).top());
    }
    EXPECT_THROW(generate_election(world, q, parse_format("rank-rank"), 0, 9), InputError);
    EXPECT_THROW(generate_election(world, spvote::testing::abcd(std::nullopt), parse_format("rank-rank"), 5, 9),
                 InputError);
    EXPECT_THROW(generate_election(world, q, parse_format("rank-rank"), 5, 9, {1.5}), InputError);
}

TEST(GenerateElection, VotesFollowMallows) {
    const auto world = WorldModel::mallows(4, 0.3);
    const Ranking truth({1, 2, 0, 3});
    const auto q = spvote::testing::abcd(truth);
    const std::size_t n = 1000;
    const auto e = generate_election(world, q, parse_format("rank-none"), n, 2024);
    std::map<Ranking, int> counts;
    for (const auto& r : e.responses) ++counts[std::get<Ranking>(r.vote)];
    const auto pmf = mallows_pmf(world.space(), truth, 0.3);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const double expect = pmf[i] * n;
        const double sd = std::sqrt(n * pmf[i] * (1 - pmf[i]));
        EXPECT_NEAR(counts[world.space().at(i)], expect, 3 * sd + 1e-9) << i;
    }
}

TEST(AdversarialWorld, TwoWorlds) {
    const auto w = adversarial_world(0.9, 0.6);
    const std::size_t ab = w.space().index_of(Ranking({0, 1}));
    const std::size_t ba = w.space().index_of(Ranking({1, 0}));
    // Under truth b>a the majority still sees a>b.
    EXPECT_NEAR(w.signal_row(ba)[ab], 0.6, 1e-12);
    EXPECT_NEAR(w.signal_row(ab)[ab], 0.9, 1e-12);
    EXPECT_NEAR(w.prior()[ba], 0.75, 1e-12);
    const double avg = 0.6 * w.pairwise_prediction(ab, {0, 1}) + 0.4 * w.pairwise_prediction(ba, {0, 1});
    EXPECT_GT(avg, 0.6);

    EXPECT_THROW(adversarial_world(0.6, 0.9), InputError);
    EXPECT_THROW(adversarial_world(0.9, 0.4), InputError);
    EXPECT_THROW(adversarial_world(0.9, 0.6, 0.4), InputError);
    EXPECT_EQ(adversarial_params(0.9, 0.6), (ExtractionParams{0.9, 1.0 - 0.6}));

    const auto mirrored = w.relabeled(Ranking({1, 0}));
    EXPECT_NEAR(mirrored.signal_row(ab)[ba], 0.6, 1e-12);
    EXPECT_NEAR(mirrored.prior()[ab], 0.75, 1e-12);

    // Nearly indistinguishable worlds: posterior barely moves.
    const auto close = adversarial_world(0.61, 0.6);
    EXPECT_NEAR(close.posterior_row(ab)[ba], close.posterior_row(ba)[ba], 0.02);
}

TEST(RecoveryCondition, MallowsWorlds) {
    EXPECT_TRUE(satisfies_recovery_condition(WorldModel::mallows(4, 0.8)));
    EXPECT_TRUE(satisfies_recovery_condition(WorldModel::mallows(3, 0.5)));
    EXPECT_FALSE(satisfies_recovery_condition(WorldModel::mallows(3, 1.0)));
}

TEST(CardinalReports, ExactPredictions) {
    const auto world = WorldModel::mallows(4, 0.6);
    const auto q = spvote::testing::abcd();
    const auto e = generate_election(world, q, parse_format("rank-none"), 10, 3);
    const auto reps = cardinal_pair_reports(world, e, {1, 3});
    ASSERT_EQ(reps.size(), 10u);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& sigma = std::get<Ranking>(e.responses[i].vote);
        EXPECT_EQ(reps[i].r, sigma.prefers(1, 3) ? 1 : 0);
        EXPECT_DOUBLE_EQ(reps[i].q, world.pairwise_prediction(world.space().index_of(sigma), {1, 3}));
    }
    const auto tops = generate_election(world, q, parse_format("top-none"), 3, 3);
    EXPECT_THROW(cardinal_pair_reports(world, tops, {0, 1}), InputError);
}
