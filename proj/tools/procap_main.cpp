#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "procap/dataset_io.hpp"
#include "procap/workflow.hpp"

namespace fs = std::filesystem;
using namespace procap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDimensionError = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw IoError("write failed for '" + path + "'");
}

Dataset load_dataset(const std::string& path, int subgroup_size) {
    Dataset dataset = parse_dataset(read_file(path));
    if (subgroup_size > 1) {
        for (auto& dim : dataset.dimensions) {
            const auto v = dim.series.values();
            dim.series = MeasurementSeries(std::vector<double>(v.begin(), v.end()), subgroup_size);
        }
    }
    return dataset;
}

SigmaMethod sigma_method_from_flag(const std::string& name) {
    static const std::map<std::string, SigmaMethod> methods = {
        {"amr", SigmaMethod::AMR},       {"mmr", SigmaMethod::MMR},
        {"srmssd", SigmaMethod::SRMSSD}, {"rbar", SigmaMethod::Rbar},
        {"sbar", SigmaMethod::Sbar},     {"pooled", SigmaMethod::Pooled},
        {"overall", SigmaMethod::Overall}};
    const auto it = methods.find(name);
    if (it == methods.end()) throw UsageError("unknown sigma method '" + name + "'");
    return it->second;
}

// Accepts "4" or "2..10"; everything must stay inside the constants table.
std::pair<int, int> parse_window_range(const std::string& text) {
    int lo = 0, hi = 0;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(text);
        } else {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw UsageError("cannot parse window range '" + text + "'");
    }
    if (lo < 2 || hi > 10 || lo > hi)
        throw UsageError("windows must lie in [2, 10], got '" + text + "'");
    return {lo, hi};
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

struct CommonOptions {
    std::string input;
    int subgroup_size = 1;
};

struct AnalyzeOptions {
    CommonOptions common;
    WorkflowConfig config;
    std::string mode = "full";
    std::string sigma;
    int mr_window = 2;
    std::string outliers = "tukey";
    std::string outlier_action = "flag";
    std::string criterion = "aicc";
    std::string out_path;
    std::string csv_path;
    std::string plots_dir;
};

WorkflowConfig build_config(const AnalyzeOptions& opt) {
    WorkflowConfig config = opt.config;
    config.mode = opt.mode == "simplified" ? WorkflowMode::Simplified : WorkflowMode::Full;

    if (opt.outliers == "off")
        config.outlier_method = std::nullopt;
    else if (opt.outliers == "grubbs")
        config.outlier_method = OutlierMethod::Grubbs;
    else
        config.outlier_method = OutlierMethod::TukeyFence;
    config.outlier_action =
        opt.outlier_action == "exclude" ? OutlierAction::Exclude : OutlierAction::Flag;

    if (opt.criterion == "aic")
        config.criterion = Criterion::AIC;
    else if (opt.criterion == "bic")
        config.criterion = Criterion::BIC;
    else
        config.criterion = Criterion::AICc;

    if (!opt.sigma.empty()) {
        const SigmaMethod method = sigma_method_from_flag(opt.sigma);
        std::optional<int> window;
        if (method == SigmaMethod::AMR || method == SigmaMethod::MMR) window = opt.mr_window;
        config.sigma_override = SigmaChoice{method, window};
    } else if (opt.mr_window != 2) {
        config.sigma_override = SigmaChoice{SigmaMethod::AMR, opt.mr_window};
    }
    return config;
}

void emit_plots(const std::string& dir, const Dataset& dataset,
                const std::vector<CapabilityReport>& reports) {
    fs::create_directories(dir);
    for (size_t i = 0; i < dataset.dimensions.size(); ++i) {
        const auto& dim = dataset.dimensions[i];
        const QuantileTriple* q = reports[i].quantiles ? &*reports[i].quantiles : nullptr;
        try {
            write_file(dir + "/" + dim.id + "_histogram.svg",
                       emit_histogram_svg(dim.series, &dim.spec, q, "dimension " + dim.id));
        } catch (const Error&) {
            // Degenerate series cannot be plotted; the report already says why.
        }
    }

    // Cpk/Ppk ratios over every moving-range estimator, one histogram for the
    // whole dataset.
    std::vector<double> ratios;
    for (const auto& dim : dataset.dimensions) {
        if (dim.series.subgroup_size() != 1 || dim.series.size() < 11) continue;
        const auto values = dim.series.values();
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= values.size();
        const auto ppk = centering_index(dim.spec, mean, overall_sigma(dim.series).value);
        if (!ppk.value || *ppk.value == 0.0) continue;
        for (SigmaMethod method : {SigmaMethod::AMR, SigmaMethod::MMR}) {
            for (int w = 2; w <= 10; ++w) {
                const auto sw = method == SigmaMethod::AMR ? within_sigma_amr(dim.series, w)
                                                           : within_sigma_mmr(dim.series, w);
                const auto cpk = centering_index(dim.spec, mean, sw.value);
                if (cpk.value) ratios.push_back(*cpk.value / *ppk.value);
            }
        }
    }
    if (ratios.size() >= 2)
        write_file(dir + "/ratio_cpk_ppk.svg",
                   emit_ratio_histogram_svg(ratios, 0.9, 1.1, "Cpk / Ppk"));
}

int cmd_analyze(const AnalyzeOptions& opt) {
    const Dataset dataset = load_dataset(opt.common.input, opt.common.subgroup_size);
    const WorkflowConfig config = build_config(opt);
    const auto reports = analyze_dataset(dataset, config);

    const std::string json = emit_reports_json(reports);
    if (opt.out_path.empty())
        std::cout << json;
    else
        write_file(opt.out_path, json);

    if (!opt.csv_path.empty()) {
        std::string table = report_csv_header();
        for (const auto& r : reports) table += emit_report(r, ReportFormat::CsvRow);
        write_file(opt.csv_path, table);
    }
    if (!opt.plots_dir.empty()) emit_plots(opt.plots_dir, dataset, reports);

    for (const auto& r : reports)
        if (r.error) return kExitDimensionError;
    return kExitOk;
}

struct SigmaOptions {
    CommonOptions common;
    std::vector<std::string> methods = {"amr", "mmr"};
    std::string windows = "2..10";
    std::string out_path;
};

int cmd_sigma(const SigmaOptions& opt) {
    const Dataset dataset = load_dataset(opt.common.input, opt.common.subgroup_size);
    const auto [w_lo, w_hi] = parse_window_range(opt.windows);

    bool want_amr = false, want_mmr = false, want_overall = false;
    for (const auto& m : opt.methods) {
        if (m == "amr")
            want_amr = true;
        else if (m == "mmr")
            want_mmr = true;
        else if (m == "overall")
            want_overall = true;
        else
            throw UsageError("sigma matrix supports methods amr, mmr, overall; got '" + m + "'");
    }
    // The default method set carries the full Table-III-shaped matrix.
    if (want_amr && want_mmr) want_overall = true;

    std::ostringstream out;
    out << "NO.";
    if (want_overall) out << ",sigma_overall";
    if (want_amr)
        for (int w = w_lo; w <= w_hi; ++w) out << ",A" << w;
    if (want_mmr)
        for (int w = w_lo; w <= w_hi; ++w) out << ",M" << w;
    out << "\n";

    for (const auto& dim : dataset.dimensions) {
        out << dim.id;
        if (want_overall) out << "," << fixed(overall_sigma(dim.series).value, 4);
        if (want_amr)
            for (int w = w_lo; w <= w_hi; ++w)
                out << "," << fixed(within_sigma_amr(dim.series, w).value, 4);
        if (want_mmr)
            for (int w = w_lo; w <= w_hi; ++w)
                out << "," << fixed(within_sigma_mmr(dim.series, w).value, 4);
        out << "\n";
    }

    if (opt.out_path.empty())
        std::cout << out.str();
    else
        write_file(opt.out_path, out.str());
    return kExitOk;
}

struct FitOptions {
    CommonOptions common;
    std::string criterion = "aicc";
    std::string out_path;
};

int cmd_fit(const FitOptions& opt) {
    const Dataset dataset = load_dataset(opt.common.input, opt.common.subgroup_size);
    Criterion criterion = Criterion::AICc;
    if (opt.criterion == "aic") criterion = Criterion::AIC;
    if (opt.criterion == "bic") criterion = Criterion::BIC;

    std::ostringstream out;
    out << "dimension,rank,family,k,loglik,aic,bic,aicc,excluded_reason\n";
    bool any_error = false;
    for (const auto& dim : dataset.dimensions) {
        std::vector<Family> candidates = {Family::Normal,      Family::LogNormal,
                                          Family::Exponential, Family::Gamma,
                                          Family::Weibull2p,   Family::Weibull3p};
        if (dim.series.size() < 20) candidates.pop_back();
        try {
            const auto ranked = select_best_distribution(dim.series, candidates, criterion);
            int rank = 1;
            for (const auto& fit : ranked.fits) {
                out << dim.id << "," << rank++ << "," << to_string(fit.family) << ","
                    << family_param_count(fit.family) << "," << fixed(fit.loglik, 4) << ","
                    << fixed(fit.aic, 4) << "," << fixed(fit.bic, 4) << "," << fixed(fit.aicc, 4)
                    << ",\n";
            }
            for (const auto& excl : ranked.excluded)
                out << dim.id << ",," << to_string(excl.family) << ","
                    << family_param_count(excl.family) << ",,,,," << to_string(excl.reason)
                    << "\n";
        } catch (const Error& e) {
            out << dim.id << ",,,,,,,," << to_string(e.code()) << "\n";
            any_error = true;
        }
    }
    if (opt.out_path.empty())
        std::cout << out.str();
    else
        write_file(opt.out_path, out.str());
    return any_error ? kExitDimensionError : kExitOk;
}

struct SummaryOptions {
    CommonOptions common;
    std::vector<std::string> families = {"amr", "mmr"};
    std::string out_path;
};

int cmd_summary(const SummaryOptions& opt) {
    const Dataset dataset = load_dataset(opt.common.input, opt.common.subgroup_size);

    std::ostringstream out;
    out << "family,NO.,range,ratio,pct,pct_cum\n";
    for (const auto& name : opt.families) {
        SigmaMethod family;
        if (name == "amr")
            family = SigmaMethod::AMR;
        else if (name == "mmr")
            family = SigmaMethod::MMR;
        else
            throw UsageError("summary supports families amr and mmr; got '" + name + "'");

        std::vector<double> errors_percent;
        for (const auto& dim : dataset.dimensions)
            errors_percent.push_back(100.0 * sigma_relative_error(dim.series, family));
        const auto edges = default_summary_edges();
        const auto summary = batch_summary(errors_percent, edges, name);

        const int total = static_cast<int>(errors_percent.size());
        for (size_t b = 0; b < summary.bins.size(); ++b) {
            const auto& bin = summary.bins[b];
            std::ostringstream range;
            range << "[" << fixed(bin.lo, 1) << "%, ";
            if (std::isinf(bin.hi))
                range << "+inf)";
            else
                range << fixed(bin.hi, 1) << "%)";
            out << name << "," << (b + 1) << "," << range.str() << "," << bin.count << "|"
                << total << "," << fixed(bin.pct, 2) << "," << fixed(bin.pct_cum, 2) << "\n";
        }
    }
    if (opt.out_path.empty())
        std::cout << out.str();
    else
        write_file(opt.out_path, out.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Process-capability analysis: screening, distribution fitting, sigma\n"
                 "estimation, and the full capability-index families."};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 2 dimension errors, 64 usage, 74 I/O.\n"
               "PCAP_SEED pins the RNG seed of the simulation-based self-tests.");

    AnalyzeOptions analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run the full capability workflow");
    analyze_cmd->add_option("input", analyze.common.input, "Input CSV (case-study layout)")
        ->required();
    analyze_cmd->add_option("--mode", analyze.mode, "Workflow mode")
        ->check(CLI::IsMember({"full", "simplified"}))
        ->capture_default_str();
    analyze_cmd->add_option("--alpha", analyze.config.alpha, "Normality significance level")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    analyze_cmd->add_option("--sigma", analyze.sigma,
                            "Within-sigma override: amr|mmr|srmssd|rbar|sbar|pooled|overall");
    analyze_cmd->add_option("--mr-window", analyze.mr_window, "Moving-range window")
        ->check(CLI::Range(2, 10))
        ->capture_default_str();
    analyze_cmd
        ->add_option("--subgroup-size", analyze.common.subgroup_size, "Reshape into subgroups")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze_cmd->add_option("--outliers", analyze.outliers, "Outlier screen")
        ->check(CLI::IsMember({"tukey", "grubbs", "off"}))
        ->capture_default_str();
    analyze_cmd->add_option("--outlier-action", analyze.outlier_action, "What to do with flags")
        ->check(CLI::IsMember({"flag", "exclude"}))
        ->capture_default_str();
    analyze_cmd->add_option("--criterion", analyze.criterion, "Fit-selection criterion")
        ->check(CLI::IsMember({"aic", "bic", "aicc"}))
        ->capture_default_str();
    analyze_cmd->add_option("--out", analyze.out_path, "JSON report path (stdout if omitted)");
    analyze_cmd->add_option("--csv", analyze.csv_path, "Flattened CSV table path");
    analyze_cmd->add_option("--plots", analyze.plots_dir, "Directory for SVG plots");

    SigmaOptions sigma;
    auto* sigma_cmd = app.add_subcommand("sigma", "Sigma-estimate matrix (overall + moving range)");
    sigma_cmd->add_option("input", sigma.common.input, "Input CSV")->required();
    sigma_cmd->add_option("--methods", sigma.methods, "Comma list of amr,mmr,overall")
        ->delimiter(',')
        ->capture_default_str();
    sigma_cmd->add_option("--windows", sigma.windows, "Window or range, e.g. 2 or 2..10")
        ->capture_default_str();
    sigma_cmd->add_option("--out", sigma.out_path, "Output path (stdout if omitted)");

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Rank candidate distributions per dimension");
    fit_cmd->add_option("input", fit.common.input, "Input CSV")->required();
    fit_cmd->add_option("--criterion", fit.criterion, "Ranking criterion")
        ->check(CLI::IsMember({"aic", "bic", "aicc"}))
        ->capture_default_str();
    fit_cmd->add_option("--out", fit.out_path, "Output path (stdout if omitted)");

    SummaryOptions summary;
    auto* summary_cmd =
        app.add_subcommand("summary", "Bin sigma relative errors (moving-range vs overall)");
    summary_cmd->add_option("input", summary.common.input, "Input CSV")->required();
    summary_cmd->add_option("--family", summary.families, "amr, mmr, or both")
        ->delimiter(',')
        ->capture_default_str();
    summary_cmd->add_option("--out", summary.out_path, "Output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(analyze);
        if (sigma_cmd->parsed()) return cmd_sigma(sigma);
        if (fit_cmd->parsed()) return cmd_fit(fit);
        if (summary_cmd->parsed()) return cmd_summary(summary);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return e.code() == Errc::IoFailure ? kExitIo : kExitUsage;
    }
    return kExitUsage;
}
