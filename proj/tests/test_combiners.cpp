#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "core/combiners.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

using namespace fusion;

namespace {

PosteriorMatrix posterior(int r, int m, const std::vector<double>& row_major) {
    PosteriorMatrix p(r, m);
    p.p = row_major;
    return p;
}

PosteriorMatrix random_posterior(Rng& rng, int r, int m) {
    PosteriorMatrix p(r, m);
    for (int i = 0; i < r; ++i) {
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
            const double v = rng.uniform_real() + 1e-6;
            p.at(i, k) = v;
            total += v;
        }
        for (int k = 0; k < m; ++k) p.at(i, k) /= total;
    }
    return p;
}

MassFunction random_mass(Rng& rng, int frame) {
    // pick 1..4 random nonempty subsets and normalize
    MassFunction m(frame);
    const int focal = 1 + static_cast<int>(rng.uniform_int(4));
    std::vector<std::pair<std::uint64_t, double>> entries;
    double total = 0.0;
    for (int i = 0; i < focal; ++i) {
        const std::uint64_t subset = 1 + rng.uniform_int((1ULL << frame) - 1);
        const double w = rng.uniform_real() + 1e-3;
        entries.push_back({subset, w});
        total += w;
    }
    std::map<std::uint64_t, double> merged;
    for (const auto& [s, w] : entries) merged[s] += w / total;
    for (const auto& [s, w] : merged) m.set(s, w);
    return m;
}

// Brute-force Dempster combination over every subset pair of the frame.
// Returns {masses, k_inverse}; masses empty when in total conflict.
std::pair<std::map<std::uint64_t, double>, double> oracle_combine(const MassFunction& a,
                                                                  const MassFunction& b) {
    const int frame = a.frame_size();
    const std::uint64_t full = (1ULL << frame) - 1;
    std::map<std::uint64_t, double> raw;
    double k_inv = 0.0;
    for (std::uint64_t x = 1; x <= full; ++x) {
        for (std::uint64_t y = 1; y <= full; ++y) {
            const double product = a.mass(x) * b.mass(y);
            if (product == 0.0) continue;
            if ((x & y) != 0) {
                raw[x & y] += product;
                k_inv += product;
            }
        }
    }
    if (k_inv > 0.0)
        for (auto& [s, v] : raw) v /= k_inv;
    return {raw, k_inv};
}

} // namespace

TEST_CASE("binomial_ensemble_error") {
    CHECK(binomial_ensemble_error(0.35, 25) == doctest::Approx(0.06).epsilon(0.1));
    CHECK(binomial_ensemble_error(0.35, 25) > 0.055);
    CHECK(binomial_ensemble_error(0.35, 25) < 0.065);
    CHECK(binomial_ensemble_error(0.0, 7) == 0.0);
    CHECK(binomial_ensemble_error(0.5, 3) == doctest::Approx(0.5));
    CHECK(binomial_ensemble_error(1.0, 5) == 1.0);
    CHECK_THROWS_AS(binomial_ensemble_error(0.3, 4), Error);
    CHECK_THROWS_AS(binomial_ensemble_error(0.3, 0), Error);
}

TEST_CASE("hypothesis1 agreement bonus") {
    // Fig 4.5 sample 20: preds (25, 4, 25); class-25 confidences (1.0, 0.8, 0.6),
    // class-4 all 1.0. Agreeing classifiers 1 and 3 give 25 the edge.
    const int M = 26;
    ConfidenceMatrix conf(M, 3, ConfidenceSource::ConfusionDerived);
    conf.at(25, 0) = 1.0;
    conf.at(25, 1) = 0.8;
    conf.at(25, 2) = 0.6;
    conf.at(4, 0) = 1.0;
    conf.at(4, 1) = 1.0;
    conf.at(4, 2) = 1.0;
    const std::vector<int> preds = {25, 4, 25};
    const EnsembleDecision d = hypothesis1(preds, conf);
    CHECK(d.label == 25);
    CHECK(d.scores.at(25) == doctest::Approx(1.6));
    CHECK(d.scores.at(4) == doctest::Approx(1.0));
}

TEST_CASE("hypothesis1 unanimity and strong-single-voter cases") {
    ConfidenceMatrix conf(3, 3, ConfidenceSource::ConfusionDerived);
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) conf.at(c, r) = 0.5;
    const std::vector<int> unanimous = {2, 2, 2};
    CHECK(hypothesis1(unanimous, conf).label == 2);

    // two weak voters lose to one strong voter
    ConfidenceMatrix strong(2, 3, ConfidenceSource::ConfusionDerived);
    strong.at(0, 0) = 0.3;
    strong.at(0, 1) = 0.3;
    strong.at(1, 2) = 0.9;
    const std::vector<int> split = {0, 0, 1};
    const EnsembleDecision d = hypothesis1(split, strong);
    CHECK(d.label == 1);
    CHECK(d.scores.at(0) == doctest::Approx(0.6));
    CHECK(d.scores.at(1) == doctest::Approx(0.9));
}

TEST_CASE("hypothesis2 picks the most confident classifier") {
    const std::vector<int> preds = {9, 9, 63};
    const std::vector<double> conf = {2.1, 0.0, 1.2};
    CHECK(hypothesis2(preds, conf).label == 9);

    // the zero-confidence correct classifier is bypassed
    const std::vector<int> preds2 = {2, 9, 63};
    const std::vector<double> conf2 = {1.4, 0.0, 1.2};
    CHECK(hypothesis2(preds2, conf2).label == 2);

    // equal confidences fall back to classifier 0
    const std::vector<int> preds3 = {5, 6, 7};
    const std::vector<double> conf3 = {1.0, 1.0, 1.0};
    CHECK(hypothesis2(preds3, conf3).label == 5);

    const std::vector<double> short_conf = {1.0};
    CHECK_THROWS_AS(hypothesis2(preds3, short_conf), Error);
}

TEST_CASE("hypothesis3/4 share the weighted agreement rule") {
    ConfidenceMatrix conf(64, 3, ConfidenceSource::ConfusionDerived);
    conf.at(0, 0) = 1.0;
    conf.at(0, 1) = 1.0;
    conf.at(63, 2) = 1.0;
    const std::vector<int> preds = {0, 0, 63};
    CHECK(hypothesis3(preds, conf).label == 0); // 2.0 beats 1.0
    CHECK(hypothesis4(preds, conf).label == 0);

    const std::vector<int> unanimous = {60, 60, 60};
    CHECK(hypothesis4(unanimous, conf).label == 60);

    ConfidenceMatrix zeros(4, 3, ConfidenceSource::ConfusionDerived);
    const std::vector<int> spread = {3, 1, 2};
    CHECK(hypothesis3(spread, zeros).label == 1); // all-zero scores, lowest label
}

TEST_CASE("hypothesis5 sums per-sample confidences of agreeing classifiers") {
    const std::vector<int> preds = {0, 0, 47};
    const std::vector<double> confs = {0.888869, 0.657107, 0.171695};
    const EnsembleDecision d = hypothesis5(preds, confs);
    CHECK(d.label == 0);
    CHECK(d.scores.at(0) == doctest::Approx(0.888869 + 0.657107));
    CHECK(d.scores.at(47) == doctest::Approx(0.171695));

    const std::vector<int> unanimous = {7, 7, 7};
    const std::vector<double> c2 = {0.2, 0.3, 0.4};
    CHECK(hypothesis5(unanimous, c2).label == 7);

    // all-distinct predictions degenerate to hypothesis2
    const std::vector<int> distinct = {1, 2, 3};
    const std::vector<double> c3 = {0.5, 0.9, 0.4};
    CHECK(hypothesis5(distinct, c3).label == hypothesis2(distinct, c3).label);
}

TEST_CASE("fixed rules on a hand-worked 2x2 instance") {
    const PosteriorMatrix p = posterior(2, 2, {0.6, 0.4, 0.7, 0.3});
    const auto priors = uniform_priors(2);
    for (FixedRule rule : {FixedRule::Product, FixedRule::Sum, FixedRule::Max, FixedRule::Min,
                           FixedRule::Mean, FixedRule::Median}) {
        const EnsembleDecision d = fixed_rule(rule, p, priors);
        CHECK(d.label == 0);
    }
    // spot-check the scores themselves
    const EnsembleDecision prod = fixed_rule(FixedRule::Product, p, priors);
    CHECK(prod.scores.at(0) == doctest::Approx(2.0 * 0.6 * 0.7)); // prior^-(R-1) = 2
    const EnsembleDecision sum = fixed_rule(FixedRule::Sum, p, priors);
    CHECK(sum.scores.at(0) == doctest::Approx((1.0 - 2.0) * 0.5 + 1.3));
    const EnsembleDecision mx = fixed_rule(FixedRule::Max, p, priors);
    CHECK(mx.scores.at(0) == doctest::Approx(0.7));
    const EnsembleDecision mn = fixed_rule(FixedRule::Min, p, priors);
    CHECK(mn.scores.at(0) == doctest::Approx(0.6));
    const EnsembleDecision mean = fixed_rule(FixedRule::Mean, p, priors);
    CHECK(mean.scores.at(0) == doctest::Approx(0.65));
    const EnsembleDecision med = fixed_rule(FixedRule::Median, p, priors);
    CHECK(med.scores.at(0) == doctest::Approx(0.65));
}

TEST_CASE("fixed rules handle one-hot rows and identical rows") {
    const PosteriorMatrix onehot = posterior(2, 3, {1.0, 0.0, 0.0, 0.2, 0.3, 0.5});
    const auto priors = uniform_priors(3);
    CHECK(fixed_rule(FixedRule::Product, onehot, priors).label == 0);
    CHECK(fixed_rule(FixedRule::Min, onehot, priors).label == 0);

    Rng rng(5);
    const PosteriorMatrix one_row = random_posterior(rng, 1, 4);
    PosteriorMatrix repeated(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 4; ++k) repeated.at(i, k) = one_row.at(0, k);
    int argmax = 0;
    for (int k = 1; k < 4; ++k)
        if (one_row.at(0, k) > one_row.at(0, argmax)) argmax = k;
    for (FixedRule rule : {FixedRule::Product, FixedRule::Sum, FixedRule::Max, FixedRule::Min,
                           FixedRule::Mean, FixedRule::Median})
        CHECK(fixed_rule(rule, repeated, uniform_priors(4)).label == argmax);
}

TEST_CASE("fixed_rule validates priors") {
    const PosteriorMatrix p = posterior(1, 2, {0.5, 0.5});
    const std::vector<double> bad = {0.7, 0.6};
    CHECK_THROWS_AS(fixed_rule(FixedRule::Sum, p, bad), Error);
}

TEST_CASE("Eq 2.20 bound chain holds on 10000 random matrices") {
    Rng rng(2020);
    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int r = 1 + static_cast<int>(rng.uniform_int(5));
        const int m = 2 + static_cast<int>(rng.uniform_int(5));
        const PosteriorMatrix p = random_posterior(rng, r, m);
        for (int k = 0; k < m; ++k) {
            double prod = 1.0, mn = 1.0, mx = 0.0, sum = 0.0;
            for (int i = 0; i < r; ++i) {
                const double v = p.at(i, k);
                prod *= v;
                mn = std::min(mn, v);
                mx = std::max(mx, v);
                sum += v;
            }
            const double mean = sum / r;
            CHECK(prod <= mn);
            CHECK(mn <= mean);
            CHECK(mean <= mx);
            ++checked;
        }
    }
    CHECK(checked > 10000);
}

TEST_CASE("harden is a row-wise one-hot argmax") {
    const PosteriorMatrix p = posterior(1, 3, {0.2, 0.5, 0.3});
    const auto delta = harden(p);
    CHECK(delta == std::vector<std::uint8_t>{0, 1, 0});

    const PosteriorMatrix uniform = posterior(1, 4, {0.25, 0.25, 0.25, 0.25});
    CHECK(harden(uniform) == std::vector<std::uint8_t>{1, 0, 0, 0}); // tie rule

    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = 1 + static_cast<int>(rng.uniform_int(5));
        const int m = 2 + static_cast<int>(rng.uniform_int(6));
        const auto d = harden(random_posterior(rng, r, m));
        for (int i = 0; i < r; ++i) {
            int ones = 0;
            for (int k = 0; k < m; ++k) ones += d[static_cast<std::size_t>(i) * m + k];
            CHECK(ones == 1);
        }
    }
}

TEST_CASE("vote variants") {
    const int M = 64;
    const int REJECT = M;

    SUBCASE("unanimous") {
        const std::vector<int> same = {5, 5, 5};
        CHECK(vote(VoteVariant::Unanimous, same, M).label == 5);
        const std::vector<int> with_reject = {5, REJECT, 5};
        CHECK(vote(VoteVariant::Unanimous, with_reject, M).rejected(M));
        const std::vector<int> split = {5, 6, 5};
        CHECK(vote(VoteVariant::Unanimous, split, M).rejected(M));
    }
    SUBCASE("no conflict ignores rejections unless everyone rejects") {
        const std::vector<int> with_reject = {5, REJECT, 5};
        CHECK(vote(VoteVariant::NoConflict, with_reject, M).label == 5);
        const std::vector<int> all_reject = {REJECT, REJECT, REJECT};
        CHECK(vote(VoteVariant::NoConflict, all_reject, M).rejected(M));
        const std::vector<int> conflict = {5, 6, REJECT};
        CHECK(vote(VoteVariant::NoConflict, conflict, M).rejected(M));
    }
    SUBCASE("margin compares the top two tallies against alpha*K") {
        const std::vector<int> votes = {1, 1, 1, 2, 2};
        CHECK(vote(VoteVariant::Margin, votes, M, 0.2).label == 1);  // 3-2 >= 1
        CHECK(vote(VoteVariant::Margin, votes, M, 0.4).rejected(M)); // 3-2 < 2
        CHECK_THROWS_AS(vote(VoteVariant::Margin, votes, M, 0.0), Error);
        CHECK_THROWS_AS(vote(VoteVariant::Margin, votes, M, 1.5), Error);
    }
    SUBCASE("label range is validated") {
        const std::vector<int> bad = {65};
        CHECK_THROWS_AS(vote(VoteVariant::Unanimous, bad, M), Error);
    }
}

TEST_CASE("averaged_bayes equals the mean fixed rule") {
    const PosteriorMatrix identical = posterior(3, 2, {0.8, 0.2, 0.8, 0.2, 0.8, 0.2});
    CHECK(averaged_bayes(identical).label == 0);

    const PosteriorMatrix opposing = posterior(2, 2, {1.0, 0.0, 0.0, 1.0});
    CHECK(averaged_bayes(opposing).label == 0); // (0.5, 0.5) tie to the lowest

    Rng rng(4242);
    for (int trial = 0; trial < 500; ++trial) {
        const int r = 1 + static_cast<int>(rng.uniform_int(5));
        const int m = 2 + static_cast<int>(rng.uniform_int(6));
        const PosteriorMatrix p = random_posterior(rng, r, m);
        CHECK(averaged_bayes(p).label ==
              fixed_rule(FixedRule::Mean, p, uniform_priors(m)).label);
    }
}

TEST_CASE("ds_combine identity, hand expansion, and conflict") {
    const int M = 3;
    SUBCASE("vacuous mass is the identity element") {
        MassFunction m1(M);
        m1.set(MassFunction::singleton(0), 0.6);
        m1.set(m1.theta(), 0.4);
        const MassFunction out = ds_combine(m1, MassFunction::vacuous(M));
        CHECK(out.mass(MassFunction::singleton(0)) == doctest::Approx(0.6));
        CHECK(out.mass(out.theta()) == doctest::Approx(0.4));
    }
    SUBCASE("hand-expanded square of {A: 0.5, Theta: 0.5}") {
        MassFunction m(M);
        m.set(MassFunction::singleton(1), 0.5);
        m.set(m.theta(), 0.5);
        const MassFunction out = ds_combine(m, m);
        CHECK(out.mass(MassFunction::singleton(1)) == doctest::Approx(0.75));
        CHECK(out.mass(out.theta()) == doctest::Approx(0.25));
    }
    SUBCASE("disjoint certainties are in total conflict") {
        MassFunction a(M), b(M);
        a.set(MassFunction::singleton(0), 1.0);
        b.set(MassFunction::singleton(1), 1.0);
        CHECK_THROWS_AS(ds_combine(a, b), Error);
    }
}

TEST_CASE("ds_combine matches the brute-force oracle and its algebra") {
    Rng rng(616);
    int conflicts_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int frame = 2 + static_cast<int>(rng.uniform_int(3)); // |Theta| in 2..4
        MassFunction a = random_mass(rng, frame);
        MassFunction b = random_mass(rng, frame);
        MassFunction c = random_mass(rng, frame);
        if (trial % 7 == 0) {
            // inject certain and disjoint evidences to exercise conflicts
            a = MassFunction(frame);
            a.set(MassFunction::singleton(0), 1.0);
            b = MassFunction(frame);
            b.set(MassFunction::singleton(1), 1.0);
        }

        const auto [expected, k_inv] = oracle_combine(a, b);
        if (k_inv <= 1e-12) {
            ++conflicts_seen;
            CHECK_THROWS_AS(ds_combine(a, b), Error);
            continue;
        }
        const MassFunction ab = ds_combine(a, b);
        double total = 0.0;
        for (const auto& [subset, mass] : ab.focal_elements()) {
            CHECK(mass == doctest::Approx(expected.at(subset)).epsilon(1e-9));
            total += mass;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

        // commutativity
        const MassFunction ba = ds_combine(b, a);
        for (const auto& [subset, mass] : ab.focal_elements())
            CHECK(ba.mass(subset) == doctest::Approx(mass).epsilon(1e-9));

        // associativity (when no intermediate conflict)
        try {
            const MassFunction left = ds_combine(ab, c);
            const MassFunction right = ds_combine(a, ds_combine(b, c));
            for (const auto& [subset, mass] : left.focal_elements())
                CHECK(right.mass(subset) == doctest::Approx(mass).epsilon(1e-9));
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TotalConflict);
        }
    }
    CHECK(conflicts_seen > 0);
}

TEST_CASE("ds_from_evidence shapes") {
    const ClassifierReliability rel{0.9, 0.05};
    const MassFunction m = ds_from_evidence(2, rel, 4);
    CHECK(m.mass(MassFunction::singleton(2)) == doctest::Approx(0.9));
    CHECK(m.mass(m.theta() & ~MassFunction::singleton(2)) == doctest::Approx(0.05));
    CHECK(m.mass(m.theta()) == doctest::Approx(0.05));

    const MassFunction rejected = ds_from_evidence(4, rel, 4); // REJECT == M
    CHECK(rejected.mass(rejected.theta()) == 1.0);

    const MassFunction certain = ds_from_evidence(1, {1.0, 0.0}, 4);
    CHECK(certain.mass(MassFunction::singleton(1)) == 1.0);
    CHECK(certain.focal_elements().size() == 1);

    CHECK_THROWS_AS(ds_from_evidence(0, {0.8, 0.3}, 4), Error); // er + es > 1
}

TEST_CASE("ds_decide argmax of singleton beliefs") {
    const int M = 4;
    SUBCASE("single evidence") {
        std::vector<MassFunction> masses = {ds_from_evidence(2, {0.9, 0.0}, M)};
        CHECK(ds_decide(masses).label == 2);
    }
    SUBCASE("agreement reinforces belief") {
        const ClassifierReliability rel{0.8, 0.1};
        std::vector<MassFunction> one = {ds_from_evidence(1, rel, M)};
        std::vector<MassFunction> two = {ds_from_evidence(1, rel, M), ds_from_evidence(1, rel, M)};
        const double single_belief = ds_decide(one).scores.at(1);
        const double double_belief = ds_decide(two).scores.at(1);
        CHECK(ds_decide(two).label == 1);
        CHECK(double_belief > single_belief);
    }
    SUBCASE("symmetric disagreement falls to the lower label") {
        const ClassifierReliability rel{0.6, 0.2};
        std::vector<MassFunction> masses = {ds_from_evidence(3, rel, M), ds_from_evidence(1, rel, M)};
        const EnsembleDecision d = ds_decide(masses);
        CHECK(d.scores.at(1) == doctest::Approx(d.scores.at(3)).epsilon(1e-12));
        CHECK(d.label == 1);
    }
}

TEST_CASE("adaboost alpha formula") {
    CHECK(adaboost_alpha(0.5) == doctest::Approx(0.0));
    CHECK(adaboost_alpha(0.1) == doctest::Approx(0.5 * std::log(9.0)));
    CHECK(adaboost_alpha(0.1) == doctest::Approx(1.0986).epsilon(1e-3));
}

TEST_CASE("adaboost weight mechanics on a 4-sample instance") {
    // Round 1: threshold at 1.5, misclassifies exactly sample 3. Round 2
    // must offer a different stump: after reweighting, the first one sits
    // at exactly 50% error (which is the reweighting working as intended).
    std::vector<BinarySample> samples = {
        {{0.0}, -1}, {{1.0}, -1}, {{2.0}, 1}, {{3.0}, -1}};
    int calls = 0;
    const WeakLearner scripted = [&calls](std::span<const BinarySample>,
                                          std::span<const double> weights) {
        WeakHypothesis h;
        if (calls++ == 0) {
            h.predict = [](std::span<const double> x) { return x[0] > 1.5 ? 1 : -1; };
            h.weighted_error = weights[3];
        } else {
            h.predict = [](std::span<const double> x) { return x[0] > 2.5 ? -1 : 1; };
            h.weighted_error = weights[0] + weights[1];
        }
        return h;
    };
    const AdaBoostModel model = adaboost_train(samples, 1, scripted);
    REQUIRE(model.rounds.size() == 1);
    const double alpha = model.rounds[0].alpha;
    CHECK(alpha == doctest::Approx(0.5 * std::log(3.0))); // eps = 0.25

    // reproduce the reweighting by hand
    const double z = 3 * 0.25 * std::exp(-alpha) + 0.25 * std::exp(alpha);
    const double correct_weight = 0.25 * std::exp(-alpha) / z;
    const double wrong_weight = 0.25 * std::exp(alpha) / z;
    calls = 0;
    const AdaBoostModel two = adaboost_train(samples, 2, scripted);
    REQUIRE(two.weight_history.size() == 2);
    CHECK(two.weight_history[1][0] == doctest::Approx(correct_weight));
    CHECK(two.weight_history[1][3] == doctest::Approx(wrong_weight));
    CHECK(wrong_weight > correct_weight); // misclassified weight grows
    double sum = 0.0;
    for (double w : two.weight_history[1]) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adaboost with stumps separates a seeded 2-D corpus") {
    Rng rng(7331);
    std::vector<BinarySample> samples;
    for (int i = 0; i < 200; ++i) {
        BinarySample s;
        const bool positive = i % 2 == 0;
        // separable by the 45-degree line x + y = 0 with margin 1, which no
        // single axis-aligned stump can split
        const double u = rng.uniform_real() * 8.0 - 4.0;
        const double gap = rng.uniform_real() * 3.0 + 0.5;
        s.x = {u, (positive ? gap : -gap) - u};
        s.y = positive ? 1 : -1;
        samples.push_back(std::move(s));
    }
    const AdaBoostModel model = adaboost_train(samples, 20, decision_stump_learner());
    int errors = 0;
    for (const BinarySample& s : samples)
        if (model.predict(s.x) != s.y) ++errors;
    CHECK(errors == 0);
    for (const auto& weights : model.weight_history) {
        double sum = 0.0;
        for (double w : weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const AdaBoostRound& round : model.rounds) CHECK(round.alpha > 0.0);
}

TEST_CASE("adaboost degenerate weak learners") {
    std::vector<BinarySample> samples = {{{0.0}, 1}, {{1.0}, -1}};
    const WeakLearner useless = [](std::span<const BinarySample>, std::span<const double>) {
        WeakHypothesis h;
        h.predict = [](std::span<const double>) { return 1; };
        h.weighted_error = 0.5;
        return h;
    };
    CHECK_THROWS_AS(adaboost_train(samples, 3, useless), Error);

    const WeakLearner perfect = [](std::span<const BinarySample>, std::span<const double>) {
        WeakHypothesis h;
        h.predict = [](std::span<const double> x) { return x[0] < 0.5 ? 1 : -1; };
        h.weighted_error = 0.0;
        return h;
    };
    const AdaBoostModel model = adaboost_train(samples, 10, perfect);
    CHECK(model.rounds.size() == 1); // early stop with clamped alpha
    CHECK(model.rounds[0].alpha == doctest::Approx(adaboost_alpha(0.0)));
}

TEST_CASE("bootstrap_sample determinism and range") {
    CHECK(bootstrap_sample(1, 42) == std::vector<std::size_t>{0});
    const auto a = bootstrap_sample(50, 7);
    const auto b = bootstrap_sample(50, 7);
    CHECK(a == b);
    CHECK(a.size() == 50);
    for (std::size_t idx : a) CHECK(idx < 50);
    CHECK(bootstrap_sample(50, 8) != a);
}

TEST_CASE("bootstrap unique fraction approaches 1 - (1 - 1/n)^n") {
    const std::size_t n = 100;
    const int draws = 10000;
    double total_unique = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto indices = bootstrap_sample(n, derive_seed(12345, static_cast<std::uint64_t>(d)));
        const std::set<std::size_t> unique(indices.begin(), indices.end());
        total_unique += static_cast<double>(unique.size()) / static_cast<double>(n);
    }
    const double mean_unique = total_unique / draws;
    const double expected = 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(n), static_cast<double>(n));
    CHECK(std::abs(mean_unique - expected) <= 0.01);
}

TEST_CASE("bagging majority vote") {
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 30; ++i) {
        LabeledSample s;
        s.label = i % 2;
        s.features.values = {s.label == 0 ? -5.0 + 0.1 * i : 5.0 + 0.1 * i};
        samples.push_back(std::move(s));
    }
    const BagLearner learner = [](const std::vector<LabeledSample>& bag) -> BagPredictor {
        auto model = std::make_shared<CentroidModel>(fit_centroid(bag));
        return [model](const FeatureVector& q) { return centroid_classify(*model, q).first; };
    };

    FeatureVector left;
    left.values = {-4.0};
    FeatureVector right;
    right.values = {6.0};

    SUBCASE("B = 1 equals the single bag learner") {
        const auto indices = bootstrap_sample(samples.size(), derive_seed(99, 0));
        std::vector<LabeledSample> bag;
        for (std::size_t idx : indices) bag.push_back(samples[idx]);
        CHECK(bagging_train_predict(samples, 1, learner, left, 99) == learner(bag)(left));
    }
    SUBCASE("separable data is voted correctly and deterministically") {
        CHECK(bagging_train_predict(samples, 15, learner, left, 7) == 0);
        CHECK(bagging_train_predict(samples, 15, learner, right, 7) == 1);
        CHECK(bagging_train_predict(samples, 15, learner, left, 7) ==
              bagging_train_predict(samples, 15, learner, left, 7));
    }
    SUBCASE("vote margin recount matches per-bag predictions") {
        std::map<int, int> tallies;
        for (int b = 0; b < 15; ++b) {
            const auto indices = bootstrap_sample(samples.size(), derive_seed(7, static_cast<std::uint64_t>(b)));
            std::vector<LabeledSample> bag;
            for (std::size_t idx : indices) bag.push_back(samples[idx]);
            ++tallies[learner(bag)(left)];
        }
        int best = tallies.begin()->first, votes = tallies.begin()->second;
        for (const auto& [label, count] : tallies)
            if (count > votes) {
                votes = count;
                best = label;
            }
        CHECK(bagging_train_predict(samples, 15, learner, left, 7) == best);
    }
}

TEST_CASE("unanimity across every combiner") {
    Rng rng(31415);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 2 + static_cast<int>(rng.uniform_int(6));
        const int label = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m)));
        const int r = 3;
        const std::vector<int> preds(static_cast<std::size_t>(r), label);

        // hypotheses 1/3/4 with a nonzero confidence for the common label
        ConfidenceMatrix conf(m, r, ConfidenceSource::ConfusionDerived);
        for (int c = 0; c < m; ++c)
            for (int i = 0; i < r; ++i) conf.at(c, i) = rng.uniform_real();
        conf.at(label, 0) = std::max(conf.at(label, 0), 0.1);
        CHECK(hypothesis1(preds, conf).label == label);
        CHECK(hypothesis3(preds, conf).label == label);
        CHECK(hypothesis4(preds, conf).label == label);

        std::vector<double> sample_conf(static_cast<std::size_t>(r));
        for (double& v : sample_conf) v = rng.uniform_real() + 0.05;
        CHECK(hypothesis2(preds, sample_conf).label == label);
        CHECK(hypothesis5(preds, sample_conf).label == label);

        // fixed rules with identical rows favoring the label
        PosteriorMatrix p(r, m);
        std::vector<double> row(static_cast<std::size_t>(m));
        double total = 0.0;
        for (double& v : row) v = rng.uniform_real() + 1e-6;
        row[static_cast<std::size_t>(label)] += 1.5; // make the label the clear argmax
        for (double v : row) total += v;
        for (double& v : row) v /= total;
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < m; ++k) p.at(i, k) = row[static_cast<std::size_t>(k)];
        for (FixedRule rule : {FixedRule::Product, FixedRule::Sum, FixedRule::Max, FixedRule::Min,
                               FixedRule::Mean, FixedRule::Median})
            CHECK(fixed_rule(rule, p, uniform_priors(m)).label == label);
        CHECK(averaged_bayes(p).label == label);

        // votes
        CHECK(vote(VoteVariant::Unanimous, preds, m).label == label);
        CHECK(vote(VoteVariant::NoConflict, preds, m).label == label);
        CHECK(vote(VoteVariant::Margin, preds, m, 1.0).label == label);

        // Dempster-Shafer with agreeing evidences; the classifier must be
        // right more often than wrong (er > es), otherwise its evidence
        // argues against its own label on a 2-class frame.
        const double er = 0.2 + 0.7 * rng.uniform_real();
        const double es = 0.99 * std::min(er, 1.0 - er) * rng.uniform_real();
        std::vector<MassFunction> masses(static_cast<std::size_t>(r),
                                         ds_from_evidence(label, {er, es}, m));
        CHECK(ds_decide(masses).label == label);
    }
}
