#include <doctest.h>

#include <cmath>

#include "core/confidence.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

using namespace fusion;

namespace {

FeatureVector fv(std::vector<double> values) {
    FeatureVector f;
    f.values = std::move(values);
    return f;
}

LabeledSample sample(std::vector<double> values, int label) {
    LabeledSample s;
    s.features = fv(std::move(values));
    s.label = label;
    return s;
}

} // namespace

TEST_CASE("confidence_from_confusion is per-class recall") {
    SUBCASE("perfect diagonal") {
        ConfusionMatrix cm(3);
        cm.at(0, 0) = 5;
        cm.at(1, 1) = 5;
        cm.at(2, 2) = 5;
        for (double c : confidence_from_confusion(cm)) CHECK(c == 1.0);
    }
    SUBCASE("0.2 lattice of a 5-sample split") {
        ConfusionMatrix cm(2);
        cm.at(0, 0) = 4;
        cm.at(1, 0) = 1;
        cm.at(1, 1) = 5;
        const auto conf = confidence_from_confusion(cm);
        CHECK(conf[0] == doctest::Approx(0.8));
        CHECK(conf[1] == 1.0);
    }
    SUBCASE("all-zero column maps to zero") {
        ConfusionMatrix cm(2);
        cm.at(0, 0) = 3;
        const auto conf = confidence_from_confusion(cm);
        CHECK(conf[0] == 1.0);
        CHECK(conf[1] == 0.0);
    }
}

TEST_CASE("confidence_from_confusion stays in [0,1] on random matrices") {
    Rng rng(1234);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 1 + static_cast<int>(rng.uniform_int(6));
        ConfusionMatrix cm(m);
        for (long long& c : cm.counts) c = static_cast<long long>(rng.uniform_int(9));
        for (double c : confidence_from_confusion(cm)) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    }
}

TEST_CASE("five-sample columns always give multiples of 0.2") {
    Rng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + static_cast<int>(rng.uniform_int(5));
        ConfusionMatrix cm(m);
        // scatter exactly 5 evaluated samples per true class
        for (int t = 0; t < m; ++t)
            for (int i = 0; i < 5; ++i) ++cm.at(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m))), t);
        for (double c : confidence_from_confusion(cm)) {
            const double scaled = c * 5.0;
            CHECK(std::abs(scaled - std::round(scaled)) <= 1e-12);
        }
    }
}

TEST_CASE("margin_confidence ratio and cap") {
    CHECK(margin_confidence(1.0, 2.0) == doctest::Approx(2.0));
    CHECK(margin_confidence(3.0, 3.0) == doctest::Approx(1.0));
    CHECK(margin_confidence(0.0, 3.0) == doctest::Approx(3.0e9));
}

TEST_CASE("margin_confidence monotonicity") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const double d1 = rng.uniform_real() * 5.0;
        const double d2 = rng.uniform_real() * 5.0;
        const double bump = rng.uniform_real() + 1e-3;
        CHECK(margin_confidence(d1, d2 + bump) >= margin_confidence(d1, d2));
        CHECK(margin_confidence(d1 + bump, d2) <= margin_confidence(d1, d2));
    }
}

TEST_CASE("centroid_ratio_confidence anchors") {
    // Class 0: centroid 0, average distance 4. Class 1: far away.
    const CentroidModel model = fit_centroid(
        {sample({-4.0}, 0), sample({4.0}, 0), sample({100.0}, 1)});
    REQUIRE(model.classes[0].avg_dist == doctest::Approx(4.0));

    SUBCASE("query at the centroid hits the epsilon cap") {
        const auto [label, conf] = centroid_ratio_confidence(model, fv({0.0}));
        CHECK(label == 0);
        CHECK(conf == doctest::Approx(4.0 / kDistanceEpsilon));
    }
    SUBCASE("distance equal to the average gives 1") {
        const auto [label, conf] = centroid_ratio_confidence(model, fv({4.0}));
        CHECK(label == 0);
        CHECK(conf == doctest::Approx(1.0));
    }
    SUBCASE("distance twice the average gives 0.5") {
        const auto [label, conf] = centroid_ratio_confidence(model, fv({8.0}));
        CHECK(label == 0);
        CHECK(conf == doctest::Approx(0.5));
    }
}

TEST_CASE("confidence matrix assembly and printing") {
    const std::vector<std::vector<double>> columns = {{1.0, 0.8}, {0.6, 0.4}, {0.2, 0.0}};
    const ConfidenceMatrix conf =
        confidence_matrix_from_columns(columns, ConfidenceSource::ConfusionDerived);
    CHECK(conf.class_count == 2);
    CHECK(conf.classifier_count == 3);
    CHECK(conf.at(0, 0) == 1.0);
    CHECK(conf.at(1, 2) == 0.0);

    const std::string text = format_confidence_matrix(conf);
    CHECK(text.find("CLASS") != std::string::npos);
    CHECK(text.find("CLASSIFIER-3") != std::string::npos);
    CHECK(text.find("1.000000") != std::string::npos);
    CHECK(text.find("0.800000") != std::string::npos);

    CHECK_THROWS_AS(confidence_matrix_from_columns({}, ConfidenceSource::ConfusionDerived), Error);
    CHECK_THROWS_AS(confidence_matrix_from_columns({{1.0}, {0.5, 0.5}},
                                                   ConfidenceSource::ConfusionDerived),
                    Error);
}
