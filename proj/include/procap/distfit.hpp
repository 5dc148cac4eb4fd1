#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procap/types.hpp"

namespace procap {

enum class Family { Normal, LogNormal, Exponential, Gamma, Weibull2p, Weibull3p };

const char* to_string(Family family) noexcept;
std::optional<Family> family_from_string(const std::string& name);

/// Number of free parameters k for Eq.-(1)-style criteria.
int family_param_count(Family family) noexcept;

/// A converged maximum-likelihood fit. Parameter layout by family:
///   Normal      {mu, sigma}         (sigma is the MLE, divisor n)
///   LogNormal   {mu_log, sigma_log}
///   Exponential {rate}
///   Gamma       {shape, scale}
///   Weibull2p   {shape, scale}
///   Weibull3p   {shape, scale, location}
struct DistributionFit {
    Family family;
    std::vector<double> params;
    int n;
    double loglik;
    double aic;
    double bic;
    double aicc;
};

struct InformationCriteria {
    double aic;
    double bic;
    double aicc;  // +infinity when n <= k+1
};

InformationCriteria information_criteria(double loglik, int k, int n);

DistributionFit fit_distribution(const MeasurementSeries& series, Family family);

enum class Criterion { AIC, BIC, AICc };

const char* to_string(Criterion criterion) noexcept;

struct ExcludedFamily {
    Family family;
    Errc reason;
    std::string detail;
};

/// Candidates ranked ascending by the chosen criterion; non-converged
/// families are excluded with their reason kept. Ties break toward the
/// smaller parameter count, then family declaration order.
struct RankedFits {
    std::vector<DistributionFit> fits;
    Criterion criterion;
    std::vector<ExcludedFamily> excluded;

    const DistributionFit& best() const { return fits.front(); }
};

RankedFits select_best_distribution(const MeasurementSeries& series,
                                    const std::vector<Family>& candidates,
                                    Criterion criterion = Criterion::AICc);

/// Sorts fits ascending by the criterion; ties break toward the smaller
/// parameter count, then family declaration order.
void rank_fits(std::vector<DistributionFit>& fits, Criterion criterion);

double cdf(const DistributionFit& fit, double x);
double pdf(const DistributionFit& fit, double x);

/// Inverse CDF; |cdf(quantile(p)) - p| <= 1e-10 for p in (0, 1).
double quantile(const DistributionFit& fit, double p);

QuantileTriple quantile_triple(const DistributionFit& fit);

/// Order-statistic percentile with linear interpolation at 1+(n-1)p;
/// the fallback when no parametric family fits.
double empirical_quantile(std::span<const double> values, double p);
QuantileTriple empirical_quantile_triple(std::span<const double> values);

} // namespace procap
