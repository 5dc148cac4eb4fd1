#include "procap/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace procap {
namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

IndexValue renamed(IndexValue iv, std::string name) {
    iv.name = std::move(name);
    return iv;
}

// Plain (midpoint-form) index family. These coincide with the branching
// operations except on asymmetric bilateral specs, where the operations
// route to the starred forms and the report keeps both.
IndexValue plain_potential(const ToleranceSpec& spec, double sigma) {
    if (!(sigma > 0.0)) return IndexValue::undefined("Cp", IndexReason::ZeroSigma);
    if (!spec.bilateral()) return IndexValue::undefined("Cp", IndexReason::UnilateralCpUndefined);
    return IndexValue::defined("Cp", spec.range() / (6.0 * sigma));
}

IndexValue one_sided(const char* name, std::optional<double> limit, bool upper, double mu,
                     double sigma) {
    if (!(sigma > 0.0)) return IndexValue::undefined(name, IndexReason::ZeroSigma);
    if (!limit) return IndexValue::undefined(name, IndexReason::UnilateralCpUndefined);
    const double dist = upper ? *limit - mu : mu - *limit;
    return IndexValue::defined(name, dist / (3.0 * sigma));
}

IndexValue plain_taguchi(const ToleranceSpec& spec, double mu, double sigma) {
    if (!(sigma > 0.0)) return IndexValue::undefined("Cpm", IndexReason::ZeroSigma);
    if (!spec.has_target()) return IndexValue::undefined("Cpm", IndexReason::NoTarget);
    const double bias = mu - *spec.target();
    const double d = 3.0 * std::sqrt(sigma * sigma + bias * bias);
    if (spec.bilateral()) return IndexValue::defined("Cpm", spec.range() / (2.0 * d));
    if (spec.usl()) return IndexValue::defined("Cpm", (*spec.usl() - *spec.target()) / d);
    return IndexValue::defined("Cpm", (*spec.target() - *spec.lsl()) / d);
}

IndexValue plain_taguchi_centering(const ToleranceSpec& spec, double mu, double sigma) {
    if (!(sigma > 0.0)) return IndexValue::undefined("Cpmk", IndexReason::ZeroSigma);
    if (!spec.has_target()) return IndexValue::undefined("Cpmk", IndexReason::NoTarget);
    const double bias = mu - *spec.target();
    const double d = 3.0 * std::sqrt(sigma * sigma + bias * bias);
    if (spec.bilateral())
        return IndexValue::defined("Cpmk", std::min(*spec.usl() - mu, mu - *spec.lsl()) / d);
    if (spec.usl()) return IndexValue::defined("Cpmk", (*spec.usl() - mu) / d);
    return IndexValue::defined("Cpmk", (mu - *spec.lsl()) / d);
}

void append_normal_indices(CapabilityReport& report, const ToleranceSpec& spec, double mu,
                           double sw, double so, const WorkflowConfig& config) {
    auto& out = report.indices;
    const bool simplified = config.mode == WorkflowMode::Simplified;

    out.push_back(plain_potential(spec, sw));
    if (!simplified) {
        out.push_back(starred_potential_index(spec, sw));
    }
    out.push_back(centering_index(spec, mu, sw, false, config.symmetry_tol));
    if (!simplified) {
        out.push_back(one_sided("Cpu", spec.usl(), true, mu, sw));
        out.push_back(one_sided("Cpl", spec.lsl(), false, mu, sw));
        out.push_back(starred_centering_index(spec, mu, sw));
        out.push_back(plain_taguchi(spec, mu, sw));
        out.push_back(starred_taguchi_index(spec, mu, sw));
        out.push_back(plain_taguchi_centering(spec, mu, sw));
        out.push_back(starred_taguchi_centering_index(spec, mu, sw));
    }

    out.push_back(renamed(plain_potential(spec, so), "Pp"));
    if (!simplified) {
        out.push_back(one_sided("Ppu", spec.usl(), true, mu, so));
        out.push_back(one_sided("Ppl", spec.lsl(), false, mu, so));
    }
    out.push_back(renamed(centering_index(spec, mu, so, false, config.symmetry_tol), "Ppk"));
    if (!simplified) {
        out.push_back(renamed(plain_taguchi(spec, mu, so), "Ppm"));
        out.push_back(renamed(plain_taguchi_centering(spec, mu, so), "Ppmk"));
    }
}

void terminal_error(CapabilityReport& report, const Error& e) {
    report.error = e.what();
    report.trace.push_back({"error", to_string(e.code()), "terminal"});
}

} // namespace

const char* to_string(WorkflowMode mode) noexcept {
    return mode == WorkflowMode::Full ? "full" : "simplified";
}

const char* to_string(OutlierAction action) noexcept {
    return action == OutlierAction::Flag ? "flag" : "exclude";
}

CapabilityReport analyze_dimension(const std::string& id, const ToleranceSpec& spec,
                                   const MeasurementSeries& input,
                                   const WorkflowConfig& config) {
    CapabilityReport report;
    report.dimension_id = id;

    const auto cls = classify_tolerance(spec, config.symmetry_tol);
    report.trace.push_back({"tolerance", std::string("has_target=") +
                                             (cls.has_target ? "true" : "false"),
                            to_string(cls.kind)});
    if (config.mode == WorkflowMode::Simplified &&
        cls.kind == ToleranceKind::BilateralAsymmetric)
        report.trace.push_back(
            {"simplified_mode", "asymmetric spec routed through symmetric formulas", "warning"});

    // Outlier screen (flag or exclude); the exclude path re-materializes the
    // series with flagged points removed, order preserved.
    MeasurementSeries series = input;
    if (config.outlier_method) {
        try {
            auto outliers = detect_outliers(input, *config.outlier_method, config.outlier_params);
            std::ostringstream pred;
            if (*config.outlier_method == OutlierMethod::TukeyFence)
                pred << "tukey k=" << config.outlier_params.tukey_k;
            else
                pred << "grubbs alpha=" << config.outlier_params.grubbs_alpha;
            report.trace.push_back({"outlier_screen", pred.str(),
                                    "flagged=" + std::to_string(outliers.flagged.size())});
            const bool exclude = config.outlier_action == OutlierAction::Exclude &&
                                 !outliers.flagged.empty();
            report.outliers = std::move(outliers);
            if (exclude) {
                std::vector<double> kept;
                kept.reserve(input.values().size());
                size_t next_flagged = 0;
                for (int i = 0; i < input.size(); ++i) {
                    if (next_flagged < report.outliers->flagged.size() &&
                        report.outliers->flagged[next_flagged].index == i) {
                        ++next_flagged;
                        continue;
                    }
                    kept.push_back(input.values()[i]);
                }
                series = MeasurementSeries(std::move(kept), input.subgroup_size());
                report.trace.push_back(
                    {"outlier_action", "exclude",
                     "removed=" + std::to_string(report.outliers->flagged.size())});
            }
        } catch (const Error& e) {
            terminal_error(report, e);
            return report;
        }
    } else {
        report.trace.push_back({"outlier_screen", "off", "skipped"});
    }

    report.n = series.size();
    const auto values = series.values();
    report.mean = std::accumulate(values.begin(), values.end(), 0.0) / report.n;
    report.sigma_overall = overall_sigma(series);

    try {
        report.normality = anderson_darling_normality(series, config.alpha);
    } catch (const Error& e) {
        terminal_error(report, e);
        return report;
    }
    report.trace.push_back({"normality", "anderson_darling alpha=" + format_double(config.alpha),
                            report.normality->passed ? "passed" : "failed"});

    const auto choice = select_sigma_method(series.subgroup_size(), config.sigma_override);
    {
        std::ostringstream branch;
        branch << to_string(choice.method);
        if (choice.window) branch << " w=" << *choice.window;
        report.trace.push_back({"sigma_selection",
                                "subgroup_size=" + std::to_string(series.subgroup_size()) +
                                    (config.sigma_override ? " override" : " default"),
                                branch.str()});
    }
    try {
        report.sigma_within = estimate_sigma(series, choice, config.srmssd_unbias);
    } catch (const Error& e) {
        terminal_error(report, e);
        return report;
    }

    if (report.normality->passed) {
        report.trace.push_back({"index_path", "normality passed", "normal"});
        append_normal_indices(report, spec, report.mean, report.sigma_within.value,
                              report.sigma_overall.value, config);
        return report;
    }

    report.trace.push_back({"index_path", "normality failed", "non_normal"});
    std::vector<Family> candidates;
    for (Family f : config.candidates)
        if (f != Family::Weibull3p || series.size() >= 20) candidates.push_back(f);

    bool have_fit = false;
    try {
        auto ranked = select_best_distribution(series, candidates, config.criterion);
        report.best_fit = ranked.best();
        report.trace.push_back({"distribution_fit",
                                std::string("criterion=") + to_string(config.criterion),
                                std::string("best=") + to_string(report.best_fit->family)});
        report.quantiles = quantile_triple(*report.best_fit);
        have_fit = true;
    } catch (const Error& e) {
        report.trace.push_back({"distribution_fit", to_string(e.code()), "empirical_fallback"});
        report.quantiles = empirical_quantile_triple(values);
    }

    try {
        auto nn = nonnormal_indices(spec, *report.quantiles, config.symmetry_tol);
        if (config.mode == WorkflowMode::Simplified)
            std::erase_if(nn, [](const IndexValue& iv) {
                return iv.name == "CNpm" || iv.name == "CNpmk";
            });
        for (auto& iv : nn) report.indices.push_back(std::move(iv));
    } catch (const Error& e) {
        if (e.code() != Errc::DegenerateQuantiles) throw;
        report.trace.push_back({"nonnormal_indices", "DegenerateQuantiles", "undefined"});
        for (const char* name : {"CNp", "CNpk", "CNpm", "CNpmk"})
            report.indices.push_back(
                IndexValue::undefined(name, IndexReason::DegenerateQuantiles));
    }
    if (have_fit)
        report.indices.push_back(
            IndexValue::defined("PPM", ppm_nonconforming(*report.best_fit, spec)));
    return report;
}

std::vector<CapabilityReport> analyze_dataset(const Dataset& dataset,
                                              const WorkflowConfig& config) {
    std::vector<CapabilityReport> reports;
    reports.reserve(dataset.dimensions.size());
    for (const auto& dim : dataset.dimensions)
        reports.push_back(analyze_dimension(dim.id, dim.spec, dim.series, config));
    return reports;
}

std::vector<double> default_summary_edges() { return {0.0, 5.0, 7.5, 10.0, 15.0, 20.0, 35.0, 50.0}; }

BatchSummary batch_summary(std::span<const double> values_percent,
                           std::span<const double> bin_edges_percent,
                           const std::string& ratio_mode) {
    if (values_percent.empty())
        raise(Errc::EmptyInput, "batch summary needs at least one value");
    if (bin_edges_percent.size() < 1)
        raise(Errc::InvalidArgument, "at least one bin edge required");
    for (size_t i = 1; i < bin_edges_percent.size(); ++i)
        if (!(bin_edges_percent[i - 1] < bin_edges_percent[i]))
            raise(Errc::InvalidArgument, "bin edges must be strictly increasing");

    const size_t bins = bin_edges_percent.size();  // last bin is [edge.back(), +inf)
    std::vector<int> counts(bins, 0);
    for (double v : values_percent) {
        size_t b = 0;
        while (b + 1 < bins && v >= bin_edges_percent[b + 1]) ++b;
        ++counts[b];
    }

    BatchSummary summary;
    summary.ratio_mode = ratio_mode;
    const auto [mn, mx] = std::minmax_element(values_percent.begin(), values_percent.end());
    summary.min = *mn;
    summary.max = *mx;
    const double n = static_cast<double>(values_percent.size());
    long cum = 0;
    for (size_t b = 0; b < bins; ++b) {
        cum += counts[b];
        summary.bins.push_back({bin_edges_percent[b],
                                b + 1 < bins ? bin_edges_percent[b + 1]
                                             : std::numeric_limits<double>::infinity(),
                                counts[b], 100.0 * counts[b] / n, 100.0 * cum / n});
    }
    return summary;
}

double sigma_relative_error(const MeasurementSeries& series, SigmaMethod family) {
    if (family != SigmaMethod::AMR && family != SigmaMethod::MMR)
        raise(Errc::InvalidArgument, "relative error is defined for the AMR and MMR families");
    if (series.subgroup_size() != 1)
        raise(Errc::SubgroupNotOne, "relative error needs individuals data");
    if (series.size() < 10)
        raise(Errc::TooFewSamples, "relative error needs n >= 10 (largest window)");
    double acc = 0.0;
    for (int w = 2; w <= 10; ++w)
        acc += (family == SigmaMethod::AMR ? within_sigma_amr(series, w)
                                           : within_sigma_mmr(series, w))
                   .value;
    const double mean_within = acc / 9.0;
    const double so = overall_sigma(series).value;
    return std::abs(mean_within - so) / so;
}

} // namespace procap
