#include <doctest.h>

#include <string>

#include "procap/dataset_io.hpp"
#include "support/test_support.hpp"

using namespace procap;

namespace {
int count_occurrences(const std::string& haystack, const std::string& needle) {
    int count = 0;
    for (size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++count;
    return count;
}
} // namespace

TEST_CASE("histogram svg structure") {
    const auto dataset = test::load_table2();
    const auto& d101 = dataset.dimensions[0];

    SUBCASE("five labeled markers without a quantile triple") {
        const auto svg = emit_histogram_svg(d101.series, &d101.spec);
        CHECK(count_occurrences(svg, "class=\"marker\"") == 5);  // LSL, USL, T, mean, median
        CHECK(count_occurrences(svg, "class=\"marker-label\"") == 5);
        CHECK(count_occurrences(svg, "class=\"bar\"") >= 5);
        CHECK(count_occurrences(svg, "class=\"kde\"") == 1);
        CHECK(svg.find("<svg") == 0);
    }
    SUBCASE("quantile triple swaps the median for the three percentiles") {
        const QuantileTriple q{4.58, 4.64, 4.70};
        const auto svg = emit_histogram_svg(d101.series, &d101.spec, &q);
        CHECK(count_occurrences(svg, "class=\"marker\"") == 7);
        CHECK(svg.find("P99.865") != std::string::npos);
    }
    SUBCASE("deterministic bytes") {
        CHECK(emit_histogram_svg(d101.series, &d101.spec) ==
              emit_histogram_svg(d101.series, &d101.spec));
    }
    SUBCASE("constant series is degenerate") {
        CHECK_THROWS_AS(emit_histogram_svg(MeasurementSeries({2.0, 2.0, 2.0}), nullptr), Error);
    }
}

TEST_CASE("ratio histogram carries two dashed limit markers") {
    std::vector<double> ratios;
    for (int i = 0; i < 40; ++i) ratios.push_back(0.8 + 0.01 * i);
    const auto svg = emit_ratio_histogram_svg(ratios, 0.9, 1.1);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 2);
    CHECK(count_occurrences(svg, "class=\"marker\"") == 2);
}
