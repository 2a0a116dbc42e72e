#include "spvote/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spvote/tournament.hpp"

namespace spvote {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kArgmaxTolerance = 1e-12;

void normalize_checked(std::span<double> v, const char* what) {
    double total = 0.0;
    for (const double x : v) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw InputError(std::string(what) + " must be strictly positive");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw InputError(std::string(what) + " must sum to 1");
    }
    for (double& x : v) x /= total;
}

Ranking map_ranking(const Ranking& r, const Ranking& relabel) {
    std::vector<AltId> order;
    order.reserve(r.size());
    for (const AltId a : r.order()) order.push_back(relabel.at(static_cast<std::size_t>(a)));
    return Ranking(std::move(order));
}

std::size_t argmax_uniform(std::span<const double> values, Rng& rng) {
    const double best = *std::max_element(values.begin(), values.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= best - kArgmaxTolerance * std::abs(best)) ties.push_back(i);
    }
    return ties[ties.size() == 1 ? 0 : rng.index(ties.size())];
}

// Alternatives by descending mass, near-equal masses in uniformly random order.
Ranking order_by_mass(std::span<const double> mass, Rng& rng) {
    std::vector<AltId> order(mass.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](AltId x, AltId y) { return mass[x] > mass[y]; });
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() &&
               mass[order[j]] >= mass[order[i]] - kArgmaxTolerance * std::abs(mass[order[i]])) {
            ++j;
        }
        for (std::size_t k = j - i; k > 1; --k) {
            std::swap(order[i + k - 1], order[i + rng.index(k)]);
        }
        i = j;
    }
    return Ranking(std::move(order));
}

std::string numbered(char prefix, std::size_t i, std::size_t total) {
    std::string digits = std::to_string(i);
    const std::size_t width = std::max<std::size_t>(3, std::to_string(total).size());
    return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

RankingSpace::RankingSpace(std::size_t m, std::size_t max_alternatives) : m_(m) {
    if (m < 2) throw InputError("ranking space needs at least two alternatives");
    if (m > max_alternatives) {
        throw InputError("m=" + std::to_string(m) + " exceeds the enumeration cap of " +
                         std::to_string(max_alternatives));
    }
    std::vector<AltId> order(m);
    std::iota(order.begin(), order.end(), 0);
    do {
        rankings_.emplace_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
}

std::size_t RankingSpace::index_of(const Ranking& r) const {
    if (r.size() != m_) throw InputError("ranking does not belong to this space");
    std::size_t index = 0;
    std::vector<bool> used(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
        const AltId a = r.at(i);
        std::size_t smaller = 0;
        for (AltId b = 0; b < a; ++b) smaller += used[b] ? 0 : 1;
        used[a] = true;
        index = index * (m_ - i) + smaller;
    }
    return index;
}

double mallows_normalizer(std::size_t m, double phi) {
    if (!(phi > 0.0 && phi <= 1.0)) throw InputError("Mallows dispersion must lie in (0, 1]");
    double z = 1.0;
    for (std::size_t i = 1; i <= m; ++i) {
        double level = 0.0;
        double power = 1.0;
        for (std::size_t k = 0; k < i; ++k) {
            level += power;
            power *= phi;
        }
        z *= level;
    }
    return z;
}

std::vector<double> mallows_pmf(const RankingSpace& space, const Ranking& center, double phi) {
    const double z = mallows_normalizer(space.m(), phi);
    std::vector<double> pmf;
    pmf.reserve(space.size());
    for (const auto& r : space.rankings()) pmf.push_back(std::pow(phi, ranking_kt(r, center)) / z);
    return pmf;
}

WorldModel::WorldModel(std::shared_ptr<const RankingSpace> space, std::vector<double> prior,
                       std::vector<double> signal, std::optional<double> phi)
    : space_(std::move(space)), phi_(phi), prior_(std::move(prior)), signal_(std::move(signal)) {
    const std::size_t k = space_->size();
    const std::size_t m = space_->m();
    if (prior_.size() != k) throw InputError("prior must have one entry per ranking");
    if (signal_.size() != k * k) throw InputError("signal table must be m! x m!");
    normalize_checked(prior_, "prior");
    for (std::size_t t = 0; t < k; ++t) {
        normalize_checked(std::span<double>(signal_).subspan(t * k, k), "signal row");
    }

    posterior_.assign(k * k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        double evidence = 0.0;
        for (std::size_t t = 0; t < k; ++t) evidence += signal_[t * k + s] * prior_[t];
        for (std::size_t t = 0; t < k; ++t) {
            posterior_[s * k + t] = signal_[t * k + s] * prior_[t] / evidence;
        }
    }

    other_.assign(k * k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            const double w = posterior_[s * k + t];
            for (std::size_t o = 0; o < k; ++o) other_[s * k + o] += w * signal_[t * k + o];
        }
    }

    const auto pairs = pairs_of(m);
    top_mass_.assign(k * m, 0.0);
    pairwise_.assign(k * pairs.size(), 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t o = 0; o < k; ++o) {
            const double w = other_[s * k + o];
            const Ranking& r = space_->at(o);
            top_mass_[s * m + static_cast<std::size_t>(r.top())] += w;
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                if (r.prefers(pairs[p].a, pairs[p].b)) pairwise_[s * pairs.size() + p] += w;
            }
        }
    }
}

WorldModel WorldModel::mallows(std::size_t m, double phi, std::vector<double> prior) {
    auto space = std::make_shared<const RankingSpace>(m);
    if (prior.empty()) prior = uniform_prior(m);
    std::vector<double> signal;
    signal.reserve(space->size() * space->size());
    for (const auto& truth : space->rankings()) {
        const auto row = mallows_pmf(*space, truth, phi);
        signal.insert(signal.end(), row.begin(), row.end());
    }
    return WorldModel(std::move(space), std::move(prior), std::move(signal), phi);
}

WorldModel WorldModel::explicit_table(std::size_t m, std::vector<double> prior,
                                      const std::vector<std::vector<double>>& signal) {
    auto space = std::make_shared<const RankingSpace>(m);
    std::vector<double> flat;
    for (const auto& row : signal) {
        if (row.size() != space->size()) throw InputError("signal row must have one entry per ranking");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return WorldModel(std::move(space), std::move(prior), std::move(flat), std::nullopt);
}

std::span<const double> WorldModel::row(const std::vector<double>& matrix, std::size_t i,
                                        std::size_t width) const {
    if (i >= space_->size()) throw InputError("ranking index out of range");
    return std::span<const double>(matrix).subspan(i * width, width);
}

std::span<const double> WorldModel::signal_row(std::size_t truth) const {
    return row(signal_, truth, space_->size());
}
std::span<const double> WorldModel::posterior_row(std::size_t observed) const {
    return row(posterior_, observed, space_->size());
}
std::span<const double> WorldModel::other_vote_row(std::size_t observed) const {
    return row(other_, observed, space_->size());
}
std::span<const double> WorldModel::top_mass(std::size_t observed) const {
    return row(top_mass_, observed, space_->m());
}

double WorldModel::pairwise_prediction(std::size_t observed, AltPair pair) const {
    if (pair.a == pair.b) throw InputError("pair needs two distinct alternatives");
    const bool flipped = pair.a > pair.b;
    const AltId lo = flipped ? pair.b : pair.a;
    const AltId hi = flipped ? pair.a : pair.b;
    const double p = row(pairwise_, observed, pair_count(m()))[pair_index(m(), lo, hi)];
    return flipped ? 1.0 - p : p;
}

WorldModel WorldModel::relabeled(const Ranking& relabel) const {
    if (relabel.size() != m()) throw InputError("relabeling must cover every alternative");
    const std::size_t k = space_->size();
    std::vector<std::size_t> image(k);
    for (std::size_t i = 0; i < k; ++i) image[i] = space_->index_of(map_ranking(space_->at(i), relabel));
    std::vector<double> prior(k);
    std::vector<double> signal(k * k);
    for (std::size_t t = 0; t < k; ++t) {
        prior[image[t]] = prior_[t];
        for (std::size_t s = 0; s < k; ++s) signal[image[t] * k + image[s]] = signal_[t * k + s];
    }
    return WorldModel(space_, std::move(prior), std::move(signal), phi_);
}

std::vector<double> uniform_prior(std::size_t m) {
    const RankingSpace space(m);
    return std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size()));
}

std::vector<double> mallows_prior(std::size_t m, double phi, std::optional<Ranking> center) {
    const RankingSpace space(m);
    return mallows_pmf(space, center.value_or(Ranking::identity(m)), phi);
}

std::vector<double> posterior(const WorldModel& world, const Ranking& observed) {
    const auto r = world.posterior_row(world.space().index_of(observed));
    return {r.begin(), r.end()};
}

std::vector<double> other_vote_distribution(const WorldModel& world, const Ranking& observed) {
    const auto r = world.other_vote_row(world.space().index_of(observed));
    return {r.begin(), r.end()};
}

VoterBelief voter_belief(const WorldModel& world, const Ranking& observed) {
    return {observed, posterior(world, observed), other_vote_distribution(world, observed)};
}

Ranking sample_truth(const WorldModel& world, Rng& rng) {
    return world.space().at(rng.discrete(world.prior()));
}

std::size_t sample_signal(const WorldModel& world, const Ranking& truth, Rng& rng) {
    return rng.discrete(world.signal_row(world.space().index_of(truth)));
}

ResponseRecord respond(const WorldModel& world, std::size_t observed, ElicitationFormat format,
                       Rng& rng, const GenerationOptions& options) {
    const RankingSpace& space = world.space();
    const Ranking& sigma = space.at(observed);
    ResponseRecord rec;
    rec.format = format;
    if (format.vote == VoteKind::Top) {
        rec.vote = TopChoice{sigma.top()};
    } else {
        rec.vote = sigma;
    }

    const bool noisy = format.has_prediction() && options.prediction_noise > 0.0 &&
                       rng.uniform01() < options.prediction_noise;
    switch (format.prediction) {
        case PredictionKind::None:
            rec.prediction = NoPrediction{};
            break;
        case PredictionKind::Top:
            rec.prediction = TopChoice{static_cast<AltId>(
                noisy ? rng.index(world.m()) : argmax_uniform(world.top_mass(observed), rng))};
            break;
        case PredictionKind::Rank:
            if (noisy) {
                rec.prediction = space.at(rng.index(space.size()));
            } else if (format.vote == VoteKind::Top) {
                // Alternatives ordered by how often others are expected to vote them top.
                rec.prediction = order_by_mass(world.top_mass(observed), rng);
            } else {
                rec.prediction = space.at(argmax_uniform(world.other_vote_row(observed), rng));
            }
            break;
    }
    return rec;
}

ResponseRecord generate_response(const WorldModel& world, const Ranking& truth,
                                 ElicitationFormat format, std::uint64_t rng_seed,
                                 const GenerationOptions& options) {
    Rng signal_rng(derive_seed(rng_seed, {1}));
    Rng report_rng(derive_seed(rng_seed, {2}));
    return respond(world, sample_signal(world, truth, signal_rng), format, report_rng, options);
}

Election generate_election(const WorldModel& world, const Question& question,
                           ElicitationFormat format, std::size_t n, std::uint64_t rng_seed,
                           const GenerationOptions& options) {
    if (n == 0) throw InputError("an election needs at least one voter");
    if (!question.ground_truth) throw InputError("simulating needs the question's ground truth");
    if (question.m() != world.m()) throw InputError("question size differs from the world's");
    if (!(options.prediction_noise >= 0.0 && options.prediction_noise <= 1.0)) {
        throw InputError("prediction noise must lie in [0, 1]");
    }
    Rng signal_rng(derive_seed(rng_seed, {1}));
    Rng report_rng(derive_seed(rng_seed, {2}));
    std::vector<std::size_t> signals(n);
    for (auto& s : signals) s = sample_signal(world, *question.ground_truth, signal_rng);

    Election e;
    e.question = question;
    e.responses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto rec = respond(world, signals[i], format, report_rng, options);
        rec.question_id = question.question_id;
        rec.voter_id = numbered('v', i + 1, n);
        e.responses.push_back(std::move(rec));
    }
    return e;
}

WorldModel adversarial_world(double p_high, double p_low, double prior_majority_wrong) {
    if (!(0.5 < p_low && p_low < p_high && p_high < 1.0)) {
        throw InputError("adversarial world needs 0.5 < p_low < p_high < 1");
    }
    if (!(prior_majority_wrong > 0.5 && prior_majority_wrong < 1.0)) {
        throw InputError("prior on the majority-wrong world must lie in (0.5, 1)");
    }
    // Index 0 is [a,b] (a>b), index 1 is [b,a].
    return WorldModel::explicit_table(2, {1.0 - prior_majority_wrong, prior_majority_wrong},
                                      {{p_high, 1.0 - p_high}, {p_low, 1.0 - p_low}});
}

ExtractionParams adversarial_params(double p_high, double p_low) {
    ExtractionParams p{p_high, 1.0 - p_low};
    p.validate();
    return p;
}

bool satisfies_recovery_condition(const WorldModel& world) {
    const std::size_t k = world.space().size();
    for (std::size_t pi = 0; pi < k; ++pi) {
        const double own = world.posterior_row(pi)[pi];
        for (std::size_t other = 0; other < k; ++other) {
            if (other != pi && !(own > world.posterior_row(other)[pi])) return false;
        }
    }
    return true;
}

std::vector<PairwiseReport> cardinal_pair_reports(const WorldModel& world, const Election& election,
                                                  AltPair pair) {
    if (election.question.m() != world.m()) throw InputError("election size differs from the world's");
    std::vector<PairwiseReport> out;
    out.reserve(election.responses.size());
    for (const auto& resp : election.responses) {
        const auto* sigma = std::get_if<Ranking>(&resp.vote);
        if (!sigma) throw InputError("cardinal reports need rank votes");
        const std::size_t idx = world.space().index_of(*sigma);
        out.push_back({resp.voter_id, sigma->prefers(pair.a, pair.b) ? 1 : 0,
                       world.pairwise_prediction(idx, pair), true});
    }
    return out;
}

}  // namespace spvote
