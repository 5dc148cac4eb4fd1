#include "procap/sigma.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace procap {
namespace {

// Unbiasing constants for subgroup sizes 2..10: d2, c4, d3, d4.
constexpr std::array<std::array<double, 4>, 9> kChartConstants{{
    {1.1284, 0.7979, 0.8525, 0.9539},
    {1.6926, 0.8862, 0.8884, 1.5878},
    {2.0588, 0.9213, 0.8798, 1.9783},
    {2.3259, 0.9400, 0.8641, 2.2569},
    {2.5344, 0.9515, 0.8480, 2.4717},
    {2.7044, 0.9594, 0.8332, 2.6455},
    {2.8472, 0.9650, 0.8198, 2.7908},
    {2.9700, 0.9693, 0.8078, 2.9154},
    {3.0775, 0.9727, 0.7971, 3.0242},
}};

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> moving_ranges(std::span<const double> x, int w) {
    std::vector<double> mrs;
    mrs.reserve(x.size() - w + 1);
    for (size_t i = w - 1; i < x.size(); ++i) {
        auto window = x.subspan(i - (w - 1), w);
        auto [lo, hi] = std::minmax_element(window.begin(), window.end());
        mrs.push_back(*hi - *lo);
    }
    return mrs;
}

void require_individuals(const MeasurementSeries& series) {
    if (series.subgroup_size() != 1)
        raise(Errc::SubgroupNotOne, "moving-range estimators need individuals data");
}

void require_window(const MeasurementSeries& series, int w) {
    if (w < 2 || w > 10)
        raise(Errc::WindowOutOfRange, "moving-range window must be in [2, 10]");
    if (series.size() < w)
        raise(Errc::TooFewSamples, "series shorter than the moving-range window");
}

int require_subgroup_in_table(const MeasurementSeries& series) {
    const int m = series.subgroup_size();
    if (m < 2)
        raise(Errc::SubgroupTooSmall, "subgroup estimators need subgroup_size >= 2");
    if (m > 10)
        raise(Errc::SubgroupOutOfTable, "no chart constants beyond subgroup size 10");
    return m;
}

} // namespace

double control_chart_constant(ChartConstant name, int w) {
    if (w < 2 || w > 10)
        raise(Errc::OutOfTable, "chart constants cover sample sizes 2 to 10");
    return kChartConstants[w - 2][static_cast<int>(name)];
}

double c4_analytic(int n) {
    if (n < 2)
        raise(Errc::InvalidArgument, "c4 needs n >= 2");
    return std::sqrt(2.0 / (n - 1)) *
           std::exp(std::lgamma(n / 2.0) - std::lgamma((n - 1) / 2.0));
}

SigmaEstimate overall_sigma(const MeasurementSeries& series) {
    return {SigmaMethod::Overall, std::nullopt, sample_sd(series.values())};
}

SigmaEstimate within_sigma_amr(const MeasurementSeries& series, int w) {
    require_individuals(series);
    require_window(series, w);
    const auto mrs = moving_ranges(series.values(), w);
    return {SigmaMethod::AMR, w, mean_of(mrs) / control_chart_constant(ChartConstant::d2, w)};
}

SigmaEstimate within_sigma_mmr(const MeasurementSeries& series, int w) {
    require_individuals(series);
    require_window(series, w);
    auto mrs = moving_ranges(series.values(), w);
    return {SigmaMethod::MMR, w,
            median_of_sorted(mrs) / control_chart_constant(ChartConstant::d4, w)};
}

SigmaEstimate within_sigma_srmssd(const MeasurementSeries& series, SrmssdUnbias unbias) {
    require_individuals(series);
    const auto x = series.values();
    double ss = 0.0;
    for (size_t i = 1; i < x.size(); ++i) ss += (x[i] - x[i - 1]) * (x[i] - x[i - 1]);
    double sigma = std::sqrt(ss / (2.0 * static_cast<double>(x.size() - 1)));
    if (unbias == SrmssdUnbias::C4) sigma /= c4_analytic(series.size());
    return {SigmaMethod::SRMSSD, std::nullopt, sigma};
}

SigmaEstimate within_sigma_rbar(const MeasurementSeries& series) {
    const int m = require_subgroup_in_table(series);
    double sum_range = 0.0;
    for (int g = 0; g < series.subgroup_count(); ++g) {
        auto sg = series.subgroup(g);
        auto [lo, hi] = std::minmax_element(sg.begin(), sg.end());
        sum_range += *hi - *lo;
    }
    const double rbar = sum_range / series.subgroup_count();
    return {SigmaMethod::Rbar, std::nullopt, rbar / control_chart_constant(ChartConstant::d2, m)};
}

SigmaEstimate within_sigma_sbar(const MeasurementSeries& series) {
    const int m = require_subgroup_in_table(series);
    double sum_sd = 0.0;
    for (int g = 0; g < series.subgroup_count(); ++g) sum_sd += sample_sd(series.subgroup(g));
    const double sbar = sum_sd / series.subgroup_count();
    return {SigmaMethod::Sbar, std::nullopt, sbar / control_chart_constant(ChartConstant::c4, m)};
}

SigmaEstimate pooled_sigma(std::span<const std::vector<double>> groups) {
    if (groups.empty())
        raise(Errc::GroupTooSmall, "pooled sigma needs at least one group");
    double weighted = 0.0;
    long dof = 0;
    for (const auto& g : groups) {
        if (g.size() < 2)
            raise(Errc::GroupTooSmall, "every pooled group needs n >= 2");
        const double s = sample_sd(g);
        weighted += static_cast<double>(g.size() - 1) * s * s;
        dof += static_cast<long>(g.size()) - 1;
    }
    return {SigmaMethod::Pooled, std::nullopt, std::sqrt(weighted / static_cast<double>(dof))};
}

SigmaEstimate within_sigma_pooled(const MeasurementSeries& series) {
    if (series.subgroup_size() < 2)
        raise(Errc::GroupTooSmall, "pooled sigma needs subgroup_size >= 2");
    std::vector<std::vector<double>> groups;
    groups.reserve(series.subgroup_count());
    for (int g = 0; g < series.subgroup_count(); ++g) {
        auto sg = series.subgroup(g);
        groups.emplace_back(sg.begin(), sg.end());
    }
    return pooled_sigma(groups);
}

SigmaChoice select_sigma_method(int subgroup_size, const std::optional<SigmaChoice>& override) {
    if (override) return *override;
    if (subgroup_size == 1) return {SigmaMethod::AMR, 2};
    return {SigmaMethod::Pooled, std::nullopt};
}

SigmaEstimate estimate_sigma(const MeasurementSeries& series, const SigmaChoice& choice,
                             SrmssdUnbias srmssd_unbias) {
    switch (choice.method) {
        case SigmaMethod::Overall: return overall_sigma(series);
        case SigmaMethod::AMR: return within_sigma_amr(series, choice.window.value_or(2));
        case SigmaMethod::MMR: return within_sigma_mmr(series, choice.window.value_or(2));
        case SigmaMethod::SRMSSD: return within_sigma_srmssd(series, srmssd_unbias);
        case SigmaMethod::Rbar: return within_sigma_rbar(series);
        case SigmaMethod::Sbar: return within_sigma_sbar(series);
        case SigmaMethod::Pooled: return within_sigma_pooled(series);
    }
    raise(Errc::InvalidArgument, "unknown sigma method");
}

} // namespace procap
