#pragma once

#include <optional>
#include <span>

#include "procap/types.hpp"

namespace procap {

/// Control-chart unbiasing constants for subgroup sizes 2..10.
enum class ChartConstant { d2, c4, d3, d4 };

/// Exact table value; throws OutOfTable for w outside [2, 10].
double control_chart_constant(ChartConstant name, int w);

/// Analytic c4 for arbitrary n >= 2: sqrt(2/(n-1)) * Gamma(n/2) / Gamma((n-1)/2).
double c4_analytic(int n);

/// Sample standard deviation over all data (divisor N-1).
SigmaEstimate overall_sigma(const MeasurementSeries& series);

/// Average moving range over windows of w consecutive values, / d2(w).
/// Individuals data only.
SigmaEstimate within_sigma_amr(const MeasurementSeries& series, int w = 2);

/// Median moving range / d4(w). Individuals data only.
SigmaEstimate within_sigma_mmr(const MeasurementSeries& series, int w = 2);

enum class SrmssdUnbias { C4, None };

/// sqrt(sum of squared successive differences / (2(N-1))), unbiased by the
/// analytic c4 at the total sample count (or left raw).
SigmaEstimate within_sigma_srmssd(const MeasurementSeries& series,
                                  SrmssdUnbias unbias = SrmssdUnbias::C4);

/// Mean subgroup range / d2(m), for subgroup size m in [2, 10].
SigmaEstimate within_sigma_rbar(const MeasurementSeries& series);

/// Mean subgroup standard deviation / c4(m), for subgroup size m in [2, 10].
SigmaEstimate within_sigma_sbar(const MeasurementSeries& series);

/// Degrees-of-freedom weighted pooled standard deviation over the series
/// subgroups: sqrt(sum (n_i-1) s_i^2 / (sum n_i - k)).
SigmaEstimate within_sigma_pooled(const MeasurementSeries& series);

/// Pooled standard deviation over explicit groups.
SigmaEstimate pooled_sigma(std::span<const std::vector<double>> groups);

struct SigmaChoice {
    SigmaMethod method;
    std::optional<int> window;
};

/// Default estimator selection: individuals -> AMR with w=2, subgrouped ->
/// pooled; an override wins when provided.
SigmaChoice select_sigma_method(int subgroup_size,
                                const std::optional<SigmaChoice>& override = std::nullopt);

/// Dispatch to the estimator named by a SigmaChoice.
SigmaEstimate estimate_sigma(const MeasurementSeries& series, const SigmaChoice& choice,
                             SrmssdUnbias srmssd_unbias = SrmssdUnbias::C4);

} // namespace procap
