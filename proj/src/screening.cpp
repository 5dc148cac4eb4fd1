#include "procap/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace procap {
namespace {

double interpolated_percentile(const std::vector<double>& sorted, double p) {
    // Position convention 1+(n-1)p with linear interpolation.
    const double pos = 1.0 + (static_cast<double>(sorted.size()) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(pos)) - 1;
    const double frac = pos - std::floor(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Stephens' piecewise-exponential p-value for the adjusted statistic,
// case of both normal parameters estimated from the data.
double ad_p_value(double a2_star) {
    const double z = a2_star;
    if (z < 0.2) return 1.0 - std::exp(-13.436 + 101.14 * z - 223.73 * z * z);
    if (z < 0.34) return 1.0 - std::exp(-8.318 + 42.796 * z - 59.938 * z * z);
    if (z < 0.6) return std::exp(0.9177 - 4.279 * z - 1.38 * z * z);
    if (z < 10.0) return std::exp(1.2937 - 5.709 * z + 0.0186 * z * z);
    return 3.7e-24;
}

} // namespace

const char* to_string(OutlierMethod method) noexcept {
    switch (method) {
        case OutlierMethod::TukeyFence: return "TukeyFence";
        case OutlierMethod::Grubbs: return "Grubbs";
    }
    return "Unknown";
}

OutlierReport detect_outliers(const MeasurementSeries& series, OutlierMethod method,
                              const OutlierParams& params) {
    const auto x = series.values();
    const int n = series.size();
    OutlierReport report{method, params, {}};

    if (method == OutlierMethod::TukeyFence) {
        if (n < 4)
            raise(Errc::TooFewSamples, "Tukey fences need at least 4 observations");
        std::vector<double> sorted(x.begin(), x.end());
        std::sort(sorted.begin(), sorted.end());
        const double q1 = interpolated_percentile(sorted, 0.25);
        const double q3 = interpolated_percentile(sorted, 0.75);
        const double iqr = q3 - q1;
        const double lo = q1 - params.tukey_k * iqr;
        const double hi = q3 + params.tukey_k * iqr;
        for (int i = 0; i < n; ++i)
            if (x[i] < lo || x[i] > hi) report.flagged.push_back({i, x[i]});
        return report;
    }

    // Grubbs: two-sided test on the single largest standardized deviation.
    if (n < 3)
        raise(Errc::TooFewSamples, "Grubbs needs at least 3 observations");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));
    if (sd == 0.0) return report;

    int worst = 0;
    double worst_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dev = std::abs(x[i] - mean);
        if (dev > worst_dev) {
            worst_dev = dev;
            worst = i;
        }
    }
    const double g = worst_dev / sd;
    const boost::math::students_t t_dist(n - 2);
    const double t = boost::math::quantile(
        boost::math::complement(t_dist, params.grubbs_alpha / (2.0 * n)));
    const double g_crit =
        (n - 1.0) / std::sqrt(static_cast<double>(n)) * std::sqrt(t * t / (n - 2.0 + t * t));
    if (g > g_crit) report.flagged.push_back({worst, x[worst]});
    return report;
}

NormalityResult anderson_darling_normality(const MeasurementSeries& series, double alpha) {
    const auto x = series.values();
    const int n = series.size();
    if (n < 8)
        raise(Errc::TooFewSamples, "Anderson-Darling needs at least 8 observations");

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        raise(Errc::ConstantSeries, "Anderson-Darling is undefined for a constant series");

    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        // The complement 1 - CDF(z) is evaluated as CDF(-z); erfc keeps both
        // tails accurate down to ~1e-300.
        const double lo = std::max(1e-300, std_normal_cdf((sorted[i] - mean) / sd));
        const double hi = std::max(1e-300, std_normal_cdf(-(sorted[n - 1 - i] - mean) / sd));
        acc += (2.0 * i + 1.0) * (std::log(lo) + std::log(hi));
    }
    const double a2 = -static_cast<double>(n) - acc / n;
    const double a2_star = std::max(0.0, a2 * (1.0 + 0.75 / n + 2.25 / (n * static_cast<double>(n))));
    const double p = std::clamp(ad_p_value(a2_star), 0.0, 1.0);
    return {a2, a2_star, p, alpha, p > alpha};
}

} // namespace procap
