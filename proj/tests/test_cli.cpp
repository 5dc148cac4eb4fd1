#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PROCAP_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult result{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string table2() { return std::string(PROCAP_TEST_DATA_DIR) + "/table2.csv"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("analyze writes a nine-dimension json report") {
    const auto tmp = fs::temp_directory_path() / "procap_cli_analyze";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const auto out = tmp / "report.json";

    const auto result = run_cli("analyze " + table2() + " --mode full --sigma amr --mr-window 2 --out " +
                                out.string());
    CHECK(result.exit_code == 0);
    const auto json = nlohmann::json::parse(slurp(out));
    REQUIRE(json.size() == 9);
    CHECK(json[0]["dimension_id"] == "101");
    CHECK(json[0]["normality"]["passed"] == true);
    CHECK(json[0]["sigma_within"]["method"] == "AMR");
    fs::remove_all(tmp);
}

TEST_CASE("analyze emits csv table and svg plots on request") {
    const auto tmp = fs::temp_directory_path() / "procap_cli_plots";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    const auto result = run_cli("analyze " + table2() + " --out " + (tmp / "r.json").string() +
                                " --csv " + (tmp / "r.csv").string() + " --plots " +
                                (tmp / "plots").string());
    CHECK(result.exit_code == 0);
    const auto csv = slurp(tmp / "r.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 rows
    CHECK(fs::exists(tmp / "plots" / "101_histogram.svg"));
    CHECK(fs::exists(tmp / "plots" / "ratio_cpk_ppk.svg"));
    fs::remove_all(tmp);
}

TEST_CASE("analyze is deterministic") {
    const auto a = run_cli("analyze " + table2());
    const auto b = run_cli("analyze " + table2());
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("missing input exits 74") {
    CHECK(run_cli("analyze /nonexistent/missing.csv").exit_code == 74);
    CHECK(run_cli("sigma /nonexistent/missing.csv").exit_code == 74);
}

TEST_CASE("a dimension with a terminal error exits 2 but still reports") {
    const auto tmp = fs::temp_directory_path() / "procap_cli_error";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const auto input = tmp / "short.csv";
    {
        // Second column is too short for the normality gate.
        std::ofstream out(input);
        out << "NO.,ok,short\nT,5,5\nTol+,0.5,0.5\nTol-,0.5,0.5\n";
        for (int i = 0; i < 32; ++i) {
            out << (i + 1) << "," << (5.0 + 0.01 * ((i * 7) % 13)) << ",";
            if (i < 5) out << (5.0 + 0.01 * i);
            out << "\n";
        }
    }
    const auto out_path = tmp / "r.json";
    const auto result = run_cli("analyze " + input.string() + " --out " + out_path.string());
    CHECK(result.exit_code == 2);
    const auto json = nlohmann::json::parse(slurp(out_path));
    REQUIRE(json.size() == 2);
    CHECK(json[0]["error"].is_null());
    CHECK(json[1]["error"].is_string());
    fs::remove_all(tmp);
}

TEST_CASE("bad flags exit 64") {
    CHECK(run_cli("analyze " + table2() + " --mr-window 1").exit_code == 64);
    CHECK(run_cli("analyze " + table2() + " --mode bogus").exit_code == 64);
    CHECK(run_cli("sigma " + table2() + " --windows 2..12").exit_code == 64);
    CHECK(run_cli("sigma " + table2() + " --methods pooled").exit_code == 64);
    CHECK(run_cli("").exit_code == 64);
}

TEST_CASE("help exits 0 and documents the flags") {
    const auto top = run_cli("--help");
    CHECK(top.exit_code == 0);
    for (const char* sub : {"analyze", "sigma", "fit", "summary"})
        CHECK(top.out.find(sub) != std::string::npos);

    const auto analyze = run_cli("analyze --help");
    CHECK(analyze.exit_code == 0);
    for (const char* flag : {"--mode", "--alpha", "--sigma", "--mr-window", "--subgroup-size",
                             "--outliers", "--outlier-action", "--criterion", "--out", "--csv",
                             "--plots"})
        CHECK(analyze.out.find(flag) != std::string::npos);
}

TEST_CASE("sigma matrix matches the table shape") {
    const auto full = run_cli("sigma " + table2());
    CHECK(full.exit_code == 0);
    std::istringstream lines(full.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "NO.,sigma_overall,A2,A3,A4,A5,A6,A7,A8,A9,A10,M2,M3,M4,M5,M6,M7,M8,M9,M10");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);

    // Spot-check the published values at table precision.
    CHECK(full.out.find("101,0.0197,0.0165") != std::string::npos);
    CHECK(full.out.find("109,0.0320,0.0340") != std::string::npos);
}

TEST_CASE("sigma with one method and window yields a single column") {
    const auto result = run_cli("sigma " + table2() + " --methods amr --windows 2");
    CHECK(result.exit_code == 0);
    std::istringstream lines(result.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "NO.,A2");
}

TEST_CASE("fit ranks families per dimension") {
    const auto result = run_cli("fit " + table2());
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("dimension,rank,family") == 0);
    CHECK(result.out.find("101,1,") != std::string::npos);
}

TEST_CASE("summary bins the relative errors") {
    const auto result = run_cli("summary " + table2());
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("family,NO.,range,ratio,pct,pct_cum") == 0);
    CHECK(result.out.find("amr,1,[0.0%, 5.0%),") != std::string::npos);
    CHECK(result.out.find("|9,") != std::string::npos);
    // Cumulative percentages close at 100 for both families.
    CHECK(result.out.find("amr,8,[50.0%, +inf),") != std::string::npos);
    const auto lines_end = result.out.rfind(",100.00\n");
    CHECK(lines_end != std::string::npos);
}
