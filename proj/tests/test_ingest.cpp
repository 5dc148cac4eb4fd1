#include <doctest.h>

#include <nlohmann/json.hpp>

#include "procap/dataset_io.hpp"
#include "procap/workflow.hpp"
#include "support/test_support.hpp"

using namespace procap;
using doctest::Approx;

TEST_CASE("parse the case-study table") {
    const auto dataset = test::load_table2();
    REQUIRE(dataset.dimensions.size() == 9);
    for (const auto& dim : dataset.dimensions) CHECK(dim.series.size() == 32);

    const auto& d101 = dataset.dimensions[0];
    CHECK(d101.id == "101");
    CHECK(*d101.spec.lsl() == Approx(4.52).epsilon(1e-12));
    CHECK(*d101.spec.usl() == Approx(4.72).epsilon(1e-12));
    CHECK(*d101.spec.target() == Approx(4.62).epsilon(1e-12));
    CHECK(d101.series.values()[0] == 4.650);
    CHECK(d101.series.values()[31] == 4.646);
    CHECK(dataset.dimensions[8].id == "109");
}

TEST_CASE("parser error paths") {
    CHECK_THROWS_WITH_AS(parse_dataset(""), "empty dataset file", Error);
    CHECK_THROWS_AS(parse_dataset("\n \n"), Error);

    SUBCASE("missing tolerance row") {
        try {
            parse_dataset("NO.,101\nT,1\nTol+,0.1\n1,1.0\n2,1.1\n");
            FAIL("expected MissingToleranceRow");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MissingToleranceRow);
        }
    }
    SUBCASE("non-numeric cell reports its position") {
        try {
            parse_dataset("NO.,101\nT,1\nTol+,0.1\nTol-,0.1\n1,abc\n2,1.1\n");
            FAIL("expected NonNumericCell");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonNumericCell);
            CHECK(std::string(e.what()).find("row 5") != std::string::npos);
            CHECK(std::string(e.what()).find("column 2") != std::string::npos);
        }
    }
    SUBCASE("duplicate ids") {
        try {
            parse_dataset("NO.,101,101\nT,1,1\nTol+,0.1,0.1\nTol-,0.1,0.1\n1,1.0,1.0\n2,1.1,1.1\n");
            FAIL("expected DuplicateDimensionId");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DuplicateDimensionId);
        }
    }
}

TEST_CASE("zero tolerance legs become unilateral specs") {
    const auto ds =
        parse_dataset("NO.,a,b\nT,5,5\nTol+,0,0.5\nTol-,0.5,0\n1,5.0,5.0\n2,5.1,5.1\n");
    CHECK_FALSE(ds.dimensions[0].spec.usl());
    CHECK(*ds.dimensions[0].spec.lsl() == Approx(4.5).epsilon(1e-12));
    CHECK_FALSE(ds.dimensions[1].spec.lsl());
    CHECK(*ds.dimensions[1].spec.usl() == Approx(5.5).epsilon(1e-12));
}

TEST_CASE("ragged columns keep independent lengths") {
    const auto ds = parse_dataset(
        "NO.,a,b\nT,5,5\nTol+,0.5,0.5\nTol-,0.5,0.5\n1,5.0,5.0\n2,5.1,5.1\n3,5.2,\n");
    CHECK(ds.dimensions[0].series.size() == 3);
    CHECK(ds.dimensions[1].series.size() == 2);
}

TEST_CASE("round-trip through the canonical writer") {
    const auto dataset = test::load_table2();
    const auto emitted = emit_dataset_csv(dataset);
    const auto reparsed = parse_dataset(emitted);
    REQUIRE(reparsed.dimensions.size() == dataset.dimensions.size());
    for (size_t i = 0; i < dataset.dimensions.size(); ++i) {
        CHECK(reparsed.dimensions[i].id == dataset.dimensions[i].id);
        CHECK(reparsed.dimensions[i].spec == dataset.dimensions[i].spec);
        CHECK(reparsed.dimensions[i].series == dataset.dimensions[i].series);
    }
    // And the writer itself is a fixed point.
    CHECK(emit_dataset_csv(reparsed) == emitted);
}

TEST_CASE("parsing preserves sample order") {
    // Index-tagged fixture: values encode their position.
    std::string csv = "NO.,x\nT,100\nTol+,100\nTol-,100\n";
    for (int i = 0; i < 20; ++i)
        csv += std::to_string(i + 1) + "," + std::to_string(i * 7 % 13) + "\n";
    const auto ds = parse_dataset(csv);
    for (int i = 0; i < 20; ++i) CHECK(ds.dimensions[0].series.values()[i] == i * 7 % 13);
}

TEST_CASE("report serialization") {
    const auto dataset = test::load_table2();
    const auto& d101 = dataset.dimensions[0];
    const auto report = analyze_dimension(d101.id, d101.spec, d101.series, {});

    SUBCASE("json carries the sigma estimates with stable names") {
        const auto json = nlohmann::json::parse(emit_report(report, ReportFormat::Json));
        CHECK(json["dimension_id"] == "101");
        CHECK(json["n"] == 32);
        CHECK(json["sigma_overall"]["method"] == "Overall");
        CHECK(json["sigma_overall"]["value"].get<double>() == Approx(0.0197).epsilon(5e-3));
        CHECK(json["sigma_within"]["method"] == "AMR");
        CHECK(json["sigma_within"]["window"] == 2);
        CHECK(json["normality"]["passed"] == true);
        CHECK(json["trace"].size() > 0);
    }
    SUBCASE("identical reports serialize byte-identically") {
        const auto again = analyze_dimension(d101.id, d101.spec, d101.series, {});
        CHECK(emit_report(report, ReportFormat::Json) == emit_report(again, ReportFormat::Json));
        CHECK(emit_report(report, ReportFormat::CsvRow) ==
              emit_report(again, ReportFormat::CsvRow));
    }
    SUBCASE("csv row layout matches the header") {
        const auto header = report_csv_header();
        const auto row = emit_report(report, ReportFormat::CsvRow);
        const auto count = [](const std::string& s) {
            return std::count(s.begin(), s.end(), ',');
        };
        CHECK(count(header) == count(row));
        CHECK(header.find("Cp_star_reason") != std::string::npos);
    }
    SUBCASE("unilateral spec leaves an empty Cp cell with a reason") {
        const ToleranceSpec unilateral(std::nullopt, 4.72, 4.62);
        const auto uni = analyze_dimension("u", unilateral, d101.series, {});
        const auto row = emit_report(uni, ReportFormat::CsvRow);
        // Column 15 is Cp, column 16 its reason (1-based, after the 14 fixed columns).
        std::vector<std::string> cells;
        std::string cell;
        for (char c : row) {
            if (c == ',' || c == '\n') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += c;
            }
        }
        CHECK(cells[14] == "");
        CHECK(cells[15] == "UNILATERAL_CP_UNDEFINED");
    }
}
