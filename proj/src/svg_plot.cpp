#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <vector>

#include "procap/dataset_io.hpp"

namespace procap {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 54.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 42.0;

struct Marker {
    double x;
    std::string label;
    bool dashed;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double percentile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = 1.0 + (static_cast<double>(sorted.size()) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(pos)) - 1;
    const double frac = pos - std::floor(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

int freedman_diaconis_bins(const std::vector<double>& sorted) {
    const double range = sorted.back() - sorted.front();
    const double iqr = percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25);
    const double n = static_cast<double>(sorted.size());
    double width = 2.0 * iqr / std::cbrt(n);
    if (width <= 0.0) width = range / (std::ceil(std::log2(n)) + 1.0);
    const int bins = static_cast<int>(std::ceil(range / width));
    return std::clamp(bins, 5, 200);
}

std::string render(const std::vector<double>& values, const std::vector<Marker>& markers,
                   const std::string& title) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        raise(Errc::DegenerateRange, "all values are equal; nothing to plot");
    const size_t n = sorted.size();

    const int bins = freedman_diaconis_bins(sorted);
    double x_lo = sorted.front();
    double x_hi = sorted.back();
    for (const auto& m : markers) {
        x_lo = std::min(x_lo, m.x);
        x_hi = std::max(x_hi, m.x);
    }
    const double pad = 0.05 * (x_hi - x_lo);
    x_lo -= pad;
    x_hi += pad;

    const double bin_w = (sorted.back() - sorted.front()) / bins;
    std::vector<int> counts(bins, 0);
    for (double v : sorted) {
        int b = static_cast<int>((v - sorted.front()) / bin_w);
        counts[std::clamp(b, 0, bins - 1)]++;
    }

    // Gaussian kernel density, Silverman bandwidth; drawn over the same
    // density scale as the normalized bars.
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));
    const double iqr = percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25);
    double bw = 0.9 * (iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd) * std::pow(n, -0.2);
    if (bw <= 0.0) bw = sd;

    const int kde_points = 201;
    std::vector<double> kde(kde_points, 0.0);
    double density_max = 0.0;
    for (int i = 0; i < kde_points; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (kde_points - 1);
        double acc = 0.0;
        for (double v : sorted) {
            const double z = (x - v) / bw;
            acc += std::exp(-0.5 * z * z);
        }
        kde[i] = acc / (n * bw * std::sqrt(2.0 * M_PI));
        density_max = std::max(density_max, kde[i]);
    }
    for (int b = 0; b < bins; ++b)
        density_max = std::max(density_max, counts[b] / (n * bin_w));
    density_max *= 1.08;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double d) { return kMarginTop + plot_h * (1.0 - d / density_max); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text class=\"title\" x=\"" << fmt(kWidth / 2)
            << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

    for (int b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        const double d = counts[b] / (n * bin_w);
        const double x0 = sx(sorted.front() + b * bin_w);
        const double x1 = sx(sorted.front() + (b + 1) * bin_w);
        svg << "<rect class=\"bar\" x=\"" << fmt(x0) << "\" y=\"" << fmt(sy(d)) << "\" width=\""
            << fmt(x1 - x0) << "\" height=\"" << fmt(sy(0.0) - sy(d))
            << "\" fill=\"#9ecae1\" stroke=\"#4292c6\" stroke-width=\"0.5\"/>\n";
    }

    svg << "<path class=\"kde\" fill=\"none\" stroke=\"#08306b\" stroke-width=\"1.5\" d=\"";
    for (int i = 0; i < kde_points; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (kde_points - 1);
        svg << (i == 0 ? "M" : " L") << fmt(sx(x)) << " " << fmt(sy(kde[i]));
    }
    svg << "\"/>\n";

    svg << "<line class=\"axis\" x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(sy(0.0))
        << "\" x2=\"" << fmt(kWidth - kMarginRight) << "\" y2=\"" << fmt(sy(0.0))
        << "\" stroke=\"black\"/>\n";

    int label_slot = 0;
    for (const auto& m : markers) {
        const double x = sx(m.x);
        svg << "<line class=\"marker\" x1=\"" << fmt(x) << "\" y1=\"" << fmt(kMarginTop)
            << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(sy(0.0))
            << "\" stroke=\"#d62728\" stroke-width=\"1\"";
        if (m.dashed) svg << " stroke-dasharray=\"6 3\"";
        svg << "/>\n";
        // Staggered rows keep close-by labels readable.
        const double label_y = kMarginTop + 12.0 + 12.0 * (label_slot++ % 3);
        svg << "<text class=\"marker-label\" x=\"" << fmt(x + 3.0) << "\" y=\"" << fmt(label_y)
            << "\" font-size=\"10\" fill=\"#d62728\">" << m.label << "=" << fmt_value(m.x)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string emit_histogram_svg(const MeasurementSeries& series, const ToleranceSpec* spec,
                               const QuantileTriple* quantiles, const std::string& title) {
    const auto v = series.values();
    std::vector<double> values(v.begin(), v.end());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();

    std::vector<Marker> markers;
    if (spec) {
        if (spec->lsl()) markers.push_back({*spec->lsl(), "LSL", false});
        if (spec->usl()) markers.push_back({*spec->usl(), "USL", false});
        if (spec->target()) markers.push_back({*spec->target(), "T", false});
    }
    markers.push_back({mean, "mean", false});
    if (quantiles) {
        markers.push_back({quantiles->p00135, "P0.135", false});
        markers.push_back({quantiles->p50, "P50", false});
        markers.push_back({quantiles->p99865, "P99.865", false});
    } else {
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        markers.push_back({percentile_sorted(sorted, 0.5), "median", false});
    }
    return render(values, markers, title);
}

std::string emit_ratio_histogram_svg(std::span<const double> ratios, double lo_limit,
                                     double hi_limit, const std::string& title) {
    if (ratios.size() < 2)
        raise(Errc::TooFewSamples, "ratio histogram needs at least 2 values");
    std::vector<double> values(ratios.begin(), ratios.end());
    std::vector<Marker> markers{{lo_limit, "lo", true}, {hi_limit, "hi", true}};
    return render(values, markers, title);
}

} // namespace procap
