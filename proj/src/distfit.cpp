#include "procap/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/weibull.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

namespace procap {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kRootTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }
double mean_of(std::span<const double> v) { return sum(v) / static_cast<double>(v.size()); }

bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void require_samples(const MeasurementSeries& series, Family family) {
    if (series.size() < family_param_count(family) + 1)
        raise(Errc::TooFewSamples, std::string(to_string(family)) + " fit needs n >= k + 1");
}

void require_positive(std::span<const double> v, Family family) {
    for (double x : v)
        if (x <= 0.0)
            raise(Errc::SupportViolation,
                  std::string(to_string(family)) + " needs strictly positive data");
}

struct NormalMle {
    double mu;
    double sigma;  // divisor n
    double loglik;
};

NormalMle normal_mle(std::span<const double> v) {
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(v.size()));
    const double n = static_cast<double>(v.size());
    const double loglik = -0.5 * n * (std::log(2.0 * M_PI * sigma * sigma) + 1.0);
    return {mu, sigma, loglik};
}

// Gamma shape from ln(alpha) - digamma(alpha) = s, Newton inside a
// sign-preserving bracket.
double gamma_shape_mle(double s) {
    auto f = [&](double a) { return std::log(a) - boost::math::digamma(a) - s; };
    double alpha = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    double lo = alpha, hi = alpha;
    while (f(lo) < 0.0) lo /= 2.0;
    while (f(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double fa = f(alpha);
        if (std::abs(fa) < 1e-13) return alpha;
        const double deriv = 1.0 / alpha - boost::math::trigamma(alpha);
        double next = alpha - fa / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        (f(next) > 0.0 ? lo : hi) = next;
        if (std::abs(next - alpha) <= kRootTol * alpha) return next;
        alpha = next;
    }
    raise(Errc::NonConvergence, "gamma shape iteration exhausted its budget");
}

struct WeibullMle {
    double shape;
    double scale;
    double loglik;
};

// Shape from the profile score equation; weights are rescaled by the largest
// log so x^k never overflows.
WeibullMle weibull2p_mle(std::span<const double> v) {
    const size_t n = v.size();
    std::vector<double> logs(n);
    std::transform(v.begin(), v.end(), logs.begin(), [](double x) { return std::log(x); });
    const double lbar = mean_of(logs);
    const double lmax = *std::max_element(logs.begin(), logs.end());

    auto weighted = [&](double k, double& s0, double& s1, double& s2) {
        s0 = s1 = s2 = 0.0;
        for (double l : logs) {
            const double w = std::exp(k * (l - lmax));
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
    };
    auto g = [&](double k) {
        double s0, s1, s2;
        weighted(k, s0, s1, s2);
        return s1 / s0 - 1.0 / k - lbar;
    };

    double sd_logs = 0.0;
    for (double l : logs) sd_logs += (l - lbar) * (l - lbar);
    sd_logs = std::sqrt(sd_logs / static_cast<double>(n - 1));
    double k = sd_logs > 0.0 ? 1.28255 / sd_logs : 1.0;

    double lo = k, hi = k;
    int guard = 0;
    while (g(lo) > 0.0 && ++guard < 200) lo /= 2.0;
    while (g(hi) < 0.0 && ++guard < 400) hi *= 2.0;
    if (guard >= 400)
        raise(Errc::NonConvergence, "weibull shape bracket not found");

    bool converged = false;
    for (int it = 0; it < kMaxIterations && !converged; ++it) {
        double s0, s1, s2;
        weighted(k, s0, s1, s2);
        const double a = s1 / s0;
        const double gk = a - 1.0 / k - lbar;
        const double dgk = (s2 / s0 - a * a) + 1.0 / (k * k);
        double next = k - gk / dgk;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        (g(next) < 0.0 ? lo : hi) = next;
        converged = std::abs(next - k) <= kRootTol * k;
        k = next;
    }
    if (!converged && std::abs(g(k)) > 1e-9)
        raise(Errc::NonConvergence, "weibull shape iteration exhausted its budget");

    double s0, s1, s2;
    weighted(k, s0, s1, s2);
    const double scale = std::exp(lmax + std::log(s0 / static_cast<double>(n)) / k);
    double ll = static_cast<double>(n) * (std::log(k) - k * std::log(scale)) +
                (k - 1.0) * sum(logs) - static_cast<double>(n);
    return {k, scale, ll};
}

InformationCriteria criteria_for(double loglik, Family family, int n) {
    return information_criteria(loglik, family_param_count(family), n);
}

DistributionFit make_fit(Family family, std::vector<double> params, int n, double loglik) {
    const auto ic = criteria_for(loglik, family, n);
    return {family, std::move(params), n, loglik, ic.aic, ic.bic, ic.aicc};
}

double criterion_value(const DistributionFit& fit, Criterion criterion) {
    switch (criterion) {
        case Criterion::AIC: return fit.aic;
        case Criterion::BIC: return fit.bic;
        case Criterion::AICc: return fit.aicc;
    }
    return fit.aicc;
}

void check_fit(const DistributionFit& fit) {
    if (fit.params.size() != static_cast<size_t>(family_param_count(fit.family)))
        raise(Errc::InvalidArgument, "fit parameter count does not match its family");
}

} // namespace

const char* to_string(Family family) noexcept {
    switch (family) {
        case Family::Normal: return "Normal";
        case Family::LogNormal: return "LogNormal";
        case Family::Exponential: return "Exponential";
        case Family::Gamma: return "Gamma";
        case Family::Weibull2p: return "Weibull2p";
        case Family::Weibull3p: return "Weibull3p";
    }
    return "Unknown";
}

std::optional<Family> family_from_string(const std::string& name) {
    for (Family f : {Family::Normal, Family::LogNormal, Family::Exponential, Family::Gamma,
                     Family::Weibull2p, Family::Weibull3p})
        if (name == to_string(f)) return f;
    return std::nullopt;
}

int family_param_count(Family family) noexcept {
    switch (family) {
        case Family::Exponential: return 1;
        case Family::Weibull3p: return 3;
        default: return 2;
    }
}

const char* to_string(Criterion criterion) noexcept {
    switch (criterion) {
        case Criterion::AIC: return "AIC";
        case Criterion::BIC: return "BIC";
        case Criterion::AICc: return "AICc";
    }
    return "Unknown";
}

InformationCriteria information_criteria(double loglik, int k, int n) {
    if (k < 1)
        raise(Errc::InvalidArgument, "criteria need k >= 1");
    const double aic = -2.0 * loglik + 2.0 * k;
    const double bic = -2.0 * loglik + k * std::log(static_cast<double>(n));
    const double aicc =
        n > k + 1 ? aic + 2.0 * k * (k + 1.0) / (n - k - 1.0) : kInf;
    return {aic, bic, aicc};
}

DistributionFit fit_distribution(const MeasurementSeries& series, Family family) {
    require_samples(series, family);
    const auto x = series.values();
    const int n = series.size();

    switch (family) {
        case Family::Normal: {
            if (is_constant(x))
                raise(Errc::DegenerateData, "normal fit needs a non-constant series");
            const auto m = normal_mle(x);
            return make_fit(family, {m.mu, m.sigma}, n, m.loglik);
        }
        case Family::LogNormal: {
            require_positive(x, family);
            if (is_constant(x))
                raise(Errc::DegenerateData, "lognormal fit needs a non-constant series");
            std::vector<double> logs(x.size());
            std::transform(x.begin(), x.end(), logs.begin(),
                           [](double v) { return std::log(v); });
            const auto m = normal_mle(logs);
            const double loglik = m.loglik - sum(logs);
            return make_fit(family, {m.mu, m.sigma}, n, loglik);
        }
        case Family::Exponential: {
            require_positive(x, family);
            const double rate = 1.0 / mean_of(x);
            const double loglik = n * (std::log(rate) - 1.0);
            return make_fit(family, {rate}, n, loglik);
        }
        case Family::Gamma: {
            require_positive(x, family);
            if (is_constant(x))
                raise(Errc::DegenerateData, "gamma fit needs a non-constant series");
            const double xbar = mean_of(x);
            double lbar = 0.0;
            for (double v : x) lbar += std::log(v);
            lbar /= n;
            const double s = std::log(xbar) - lbar;
            const double shape = gamma_shape_mle(s);
            const double scale = xbar / shape;
            double loglik = 0.0;
            for (double v : x) loglik += (shape - 1.0) * std::log(v) - v / scale;
            loglik -= n * (shape * std::log(scale) + std::lgamma(shape));
            return make_fit(family, {shape, scale}, n, loglik);
        }
        case Family::Weibull2p: {
            require_positive(x, family);
            if (is_constant(x))
                raise(Errc::DegenerateData, "weibull fit needs a non-constant series");
            const auto m = weibull2p_mle(x);
            return make_fit(family, {m.shape, m.scale}, n, m.loglik);
        }
        case Family::Weibull3p: {
            if (is_constant(x))
                raise(Errc::DegenerateData, "weibull fit needs a non-constant series");
            const double xmin = *std::min_element(x.begin(), x.end());
            const double xmax = *std::max_element(x.begin(), x.end());
            const double span = xmax - xmin;
            const double offset = 1e-6 * span;

            std::vector<double> shifted(x.size());
            auto profile = [&](double loc) -> double {
                for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - loc;
                try {
                    return weibull2p_mle(shifted).loglik;
                } catch (const Error&) {
                    return -kInf;
                }
            };

            // Golden-section maximization of the profile likelihood over the
            // admissible location range.
            const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
            double a = xmin - 3.0 * span;
            double b = xmin - offset;
            double c = b - phi * (b - a);
            double d = a + phi * (b - a);
            double fc = profile(c), fd = profile(d);
            for (int it = 0; it < kMaxIterations; ++it) {
                if (fc > fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = profile(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = profile(d);
                }
                if (b - a <= 1e-10 * span) break;
            }
            const double loc = fc > fd ? c : d;
            for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - loc;
            const auto m = weibull2p_mle(shifted);
            return make_fit(family, {m.shape, m.scale, loc}, n, m.loglik);
        }
    }
    raise(Errc::InvalidArgument, "unknown family");
}

RankedFits select_best_distribution(const MeasurementSeries& series,
                                    const std::vector<Family>& candidates,
                                    Criterion criterion) {
    if (candidates.empty())
        raise(Errc::InvalidArgument, "candidate list must be non-empty");
    RankedFits ranked{{}, criterion, {}};
    for (Family family : candidates) {
        try {
            ranked.fits.push_back(fit_distribution(series, family));
        } catch (const Error& e) {
            ranked.excluded.push_back({family, e.code(), e.what()});
        }
    }
    if (ranked.fits.empty())
        raise(Errc::NoFamilyFits, "no candidate distribution converged");
    rank_fits(ranked.fits, criterion);
    return ranked;
}

void rank_fits(std::vector<DistributionFit>& fits, Criterion criterion) {
    std::stable_sort(fits.begin(), fits.end(),
                     [&](const DistributionFit& a, const DistributionFit& b) {
                         const double va = criterion_value(a, criterion);
                         const double vb = criterion_value(b, criterion);
                         if (va != vb) return va < vb;
                         const int ka = family_param_count(a.family);
                         const int kb = family_param_count(b.family);
                         if (ka != kb) return ka < kb;
                         return static_cast<int>(a.family) < static_cast<int>(b.family);
                     });
}

double cdf(const DistributionFit& fit, double x) {
    check_fit(fit);
    const auto& p = fit.params;
    switch (fit.family) {
        case Family::Normal:
            return boost::math::cdf(boost::math::normal(p[0], p[1]), x);
        case Family::LogNormal:
            if (x <= 0.0) return 0.0;
            return boost::math::cdf(boost::math::lognormal(p[0], p[1]), x);
        case Family::Exponential:
            if (x <= 0.0) return 0.0;
            return boost::math::cdf(boost::math::exponential(p[0]), x);
        case Family::Gamma:
            if (x <= 0.0) return 0.0;
            return boost::math::cdf(boost::math::gamma_distribution<>(p[0], p[1]), x);
        case Family::Weibull2p:
            if (x <= 0.0) return 0.0;
            return boost::math::cdf(boost::math::weibull(p[0], p[1]), x);
        case Family::Weibull3p:
            if (x <= p[2]) return 0.0;
            return boost::math::cdf(boost::math::weibull(p[0], p[1]), x - p[2]);
    }
    raise(Errc::InvalidArgument, "unknown family");
}

double pdf(const DistributionFit& fit, double x) {
    check_fit(fit);
    const auto& p = fit.params;
    switch (fit.family) {
        case Family::Normal:
            return boost::math::pdf(boost::math::normal(p[0], p[1]), x);
        case Family::LogNormal:
            if (x <= 0.0) return 0.0;
            return boost::math::pdf(boost::math::lognormal(p[0], p[1]), x);
        case Family::Exponential:
            if (x < 0.0) return 0.0;
            return boost::math::pdf(boost::math::exponential(p[0]), x);
        case Family::Gamma:
            if (x <= 0.0) return 0.0;
            return boost::math::pdf(boost::math::gamma_distribution<>(p[0], p[1]), x);
        case Family::Weibull2p:
            if (x <= 0.0) return 0.0;
            return boost::math::pdf(boost::math::weibull(p[0], p[1]), x);
        case Family::Weibull3p:
            if (x <= p[2]) return 0.0;
            return boost::math::pdf(boost::math::weibull(p[0], p[1]), x - p[2]);
    }
    raise(Errc::InvalidArgument, "unknown family");
}

double quantile(const DistributionFit& fit, double p) {
    check_fit(fit);
    if (!(p > 0.0 && p < 1.0))
        raise(Errc::InvalidArgument, "quantile needs p in (0, 1)");
    const auto& a = fit.params;
    switch (fit.family) {
        case Family::Normal:
            return boost::math::quantile(boost::math::normal(a[0], a[1]), p);
        case Family::LogNormal:
            return boost::math::quantile(boost::math::lognormal(a[0], a[1]), p);
        case Family::Exponential:
            return boost::math::quantile(boost::math::exponential(a[0]), p);
        case Family::Gamma:
            return boost::math::quantile(boost::math::gamma_distribution<>(a[0], a[1]), p);
        case Family::Weibull2p:
            return boost::math::quantile(boost::math::weibull(a[0], a[1]), p);
        case Family::Weibull3p:
            return a[2] + boost::math::quantile(boost::math::weibull(a[0], a[1]), p);
    }
    raise(Errc::InvalidArgument, "unknown family");
}

QuantileTriple quantile_triple(const DistributionFit& fit) {
    return {quantile(fit, 0.00135), quantile(fit, 0.5), quantile(fit, 0.99865)};
}

double empirical_quantile(std::span<const double> values, double p) {
    if (values.empty())
        raise(Errc::EmptyInput, "empirical quantile of an empty sample");
    if (!(p > 0.0 && p < 1.0))
        raise(Errc::InvalidArgument, "quantile needs p in (0, 1)");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = 1.0 + (static_cast<double>(sorted.size()) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(pos)) - 1;
    const double frac = pos - std::floor(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

QuantileTriple empirical_quantile_triple(std::span<const double> values) {
    return {empirical_quantile(values, 0.00135), empirical_quantile(values, 0.5),
            empirical_quantile(values, 0.99865)};
}

} // namespace procap
