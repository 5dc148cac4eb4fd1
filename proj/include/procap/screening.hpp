#pragma once

#include <vector>

#include "procap/types.hpp"

namespace procap {

enum class OutlierMethod { TukeyFence, Grubbs };

const char* to_string(OutlierMethod method) noexcept;

struct OutlierParams {
    double tukey_k = 1.5;     // fence multiplier
    double grubbs_alpha = 0.05;
};

struct FlaggedValue {
    int index;
    double value;
};

/// Flag-only screening result; the series itself is never mutated.
struct OutlierReport {
    OutlierMethod method;
    OutlierParams params;
    std::vector<FlaggedValue> flagged;
};

/// Tukey fences flag everything outside [Q1 - k*IQR, Q3 + k*IQR] with
/// quartiles interpolated at positions 1+(n-1)p. Grubbs flags the single
/// largest standardized deviation when it exceeds the two-sided critical
/// value at params.grubbs_alpha.
OutlierReport detect_outliers(const MeasurementSeries& series,
                              OutlierMethod method = OutlierMethod::TukeyFence,
                              const OutlierParams& params = {});

struct NormalityResult {
    double a2;       // raw Anderson-Darling statistic
    double a2_star;  // small-sample adjusted: A2 * (1 + 0.75/n + 2.25/n^2)
    double p_value;
    double alpha;
    bool passed;     // p_value > alpha
};

/// Anderson-Darling normality test with mean/variance estimated from the
/// data; p-value from the Stephens piecewise-exponential fit. Requires
/// n >= 8 and a non-constant series.
NormalityResult anderson_darling_normality(const MeasurementSeries& series,
                                           double alpha = 0.05);

} // namespace procap
