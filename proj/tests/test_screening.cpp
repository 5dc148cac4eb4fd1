#include <doctest.h>

#include <cmath>
#include <random>

#include "procap/screening.hpp"
#include "support/test_support.hpp"

using namespace procap;
using doctest::Approx;

TEST_CASE("tukey fences with interpolated quartiles") {
    SUBCASE("hand-computed fence: Q1=1.75, Q3=27.25, upper=65.5") {
        const auto report = detect_outliers(MeasurementSeries({1, 2, 3, 100}));
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].index == 3);
        CHECK(report.flagged[0].value == 100.0);
    }
    SUBCASE("constant data flags nothing") {
        CHECK(detect_outliers(MeasurementSeries({10, 10, 10, 10})).flagged.empty());
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(detect_outliers(MeasurementSeries({1, 2})), Error);
    }
    SUBCASE("re-running returns the identical flag set") {
        const MeasurementSeries s({5, 6, 7, 5.5, 6.2, 40, 6.8, 5.9});
        const auto first = detect_outliers(s);
        const auto second = detect_outliers(s);
        REQUIRE(first.flagged.size() == second.flagged.size());
        for (size_t i = 0; i < first.flagged.size(); ++i)
            CHECK(first.flagged[i].index == second.flagged[i].index);
    }
}

TEST_CASE("grubbs test") {
    SUBCASE("gross outlier flagged") {
        const auto report = detect_outliers(MeasurementSeries({10.1, 9.9, 10.0, 10.2, 9.8, 25.0}),
                                            OutlierMethod::Grubbs);
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].index == 5);
    }
    SUBCASE("clean normal sample stays clean") {
        auto rng = test::seeded_rng(10);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> v(50);
        for (auto& x : v) x = gauss(rng);
        // Keep the draw comfortably inside the critical region.
        for (auto& x : v) x = std::clamp(x, -2.5, 2.5);
        CHECK(detect_outliers(MeasurementSeries(v), OutlierMethod::Grubbs).flagged.empty());
    }
    SUBCASE("needs three samples") {
        CHECK_THROWS_AS(detect_outliers(MeasurementSeries({1, 2}), OutlierMethod::Grubbs), Error);
    }
}

TEST_CASE("anderson-darling on the case-study data") {
    const auto dataset = test::load_table2();
    for (const auto& dim : dataset.dimensions) {
        const auto result = anderson_darling_normality(dim.series, 0.05);
        INFO("dimension ", dim.id, " A2*=", result.a2_star, " p=", result.p_value);
        CHECK(result.passed);
        CHECK(result.a2_star >= result.a2);
        CHECK(result.p_value > 0.05);
    }
}

TEST_CASE("anderson-darling rejects a bimodal series") {
    auto rng = test::seeded_rng(11);
    std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
    std::vector<double> v;
    for (int i = 0; i < 16; ++i) v.push_back(0.0 + jitter(rng));
    for (int i = 0; i < 16; ++i) v.push_back(10.0 + jitter(rng));
    const auto result = anderson_darling_normality(MeasurementSeries(v), 0.05);
    CHECK_FALSE(result.passed);
    // Published critical value: A2* = 0.752 at alpha = 0.05.
    CHECK(result.a2_star > 0.752);
    CHECK(result.p_value < 0.05);
}

TEST_CASE("pass flag mirrors the p-value / alpha comparison") {
    auto rng = test::seeded_rng(12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(64);
    for (auto& x : v) x = gauss(rng);
    for (double alpha : {0.01, 0.05, 0.5, 0.99}) {
        const auto result = anderson_darling_normality(MeasurementSeries(v), alpha);
        CHECK(result.passed == (result.p_value > alpha));
        CHECK(result.alpha == alpha);
    }
}

TEST_CASE("anderson-darling guards") {
    CHECK_THROWS_AS(anderson_darling_normality(MeasurementSeries({1, 2, 3, 4, 5, 6, 7}), 0.05),
                    Error);
    std::vector<double> constant(12, 3.14);
    CHECK_THROWS_AS(anderson_darling_normality(MeasurementSeries(constant), 0.05), Error);
}

TEST_CASE("anderson-darling is affine invariant") {
    auto rng = test::seeded_rng(13);
    std::normal_distribution<double> gauss(5.0, 2.0);
    std::vector<double> v(40);
    for (auto& x : v) x = gauss(rng);

    const auto base = anderson_darling_normality(MeasurementSeries(v), 0.05);
    for (double a : {3.5, -2.0}) {
        std::vector<double> mapped(v);
        for (auto& x : mapped) x = a * x + 11.0;
        const auto result = anderson_darling_normality(MeasurementSeries(mapped), 0.05);
        CHECK(result.a2 == Approx(base.a2).epsilon(1e-9));
        CHECK(result.a2_star == Approx(base.a2_star).epsilon(1e-9));
        CHECK(result.p_value == Approx(base.p_value).epsilon(1e-9));
    }
}

TEST_CASE("anderson-darling rejection rate near nominal alpha") {
    auto rng = test::seeded_rng(14);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int rejections = 0;
    const int replicates = 1000;
    for (int r = 0; r < replicates; ++r) {
        std::vector<double> v(100);
        for (auto& x : v) x = gauss(rng);
        if (!anderson_darling_normality(MeasurementSeries(v), 0.05).passed) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / replicates;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}
