#include "procap/indices.hpp"

#include <cmath>

namespace procap {
namespace {

struct StarredPair {
    double value;
    bool zero_branch_fired;
};

// Piecewise Cpl*/Cpu* minimum shared by the starred Cpk and Cpmk forms.
StarredPair starred_min(const ToleranceSpec& spec, double mu, double sigma) {
    const double target = *spec.target();
    const double dev = std::abs(target - mu);
    const double lower_half = target - *spec.lsl();
    const double upper_half = *spec.usl() - target;

    const bool lower_zero = dev > lower_half;
    const bool upper_zero = dev > upper_half;
    const double cpl = lower_zero ? 0.0 : lower_half / (3.0 * sigma) * (1.0 - dev / lower_half);
    const double cpu = upper_zero ? 0.0 : upper_half / (3.0 * sigma) * (1.0 - dev / upper_half);
    const double value = std::min(cpl, cpu);
    const bool fired = (value == cpl && lower_zero) || (value == cpu && upper_zero);
    return {value, fired};
}

IndexValue starred_result(std::string name, const StarredPair& p) {
    return p.zero_branch_fired ? IndexValue::zero_clamped(std::move(name))
                               : IndexValue::defined(std::move(name), p.value);
}

double taguchi_denominator(double mu, double sigma, double target) {
    const double bias = mu - target;
    return 3.0 * std::sqrt(sigma * sigma + bias * bias);
}

bool zero_sigma(double sigma) { return !(sigma > 0.0); }

} // namespace

const char* to_string(IndexReason reason) noexcept {
    switch (reason) {
        case IndexReason::UnilateralCpUndefined: return "UNILATERAL_CP_UNDEFINED";
        case IndexReason::NoTarget: return "NO_TARGET";
        case IndexReason::ZeroSigma: return "ZERO_SIGMA";
        case IndexReason::DegenerateQuantiles: return "DEGENERATE_QUANTILES";
        case IndexReason::ZeroBeyondHalfTolerance: return "ZERO_BEYOND_HALF_TOLERANCE";
    }
    return "Unknown";
}

IndexValue potential_index(const ToleranceSpec& spec, double sigma, double symmetry_tol) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cp", IndexReason::ZeroSigma);
    const auto cls = classify_tolerance(spec, symmetry_tol);
    switch (cls.kind) {
        case ToleranceKind::BilateralSymmetric:
            return IndexValue::defined("Cp", spec.range() / (6.0 * sigma));
        case ToleranceKind::BilateralAsymmetric: {
            const double t = *spec.target();
            return IndexValue::defined(
                "Cp", std::min((*spec.usl() - t) / (3.0 * sigma), (t - *spec.lsl()) / (3.0 * sigma)));
        }
        default:
            return IndexValue::undefined("Cp", IndexReason::UnilateralCpUndefined);
    }
}

IndexValue centering_index(const ToleranceSpec& spec, double mu, double sigma,
                           bool respect_target, double symmetry_tol) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpk", IndexReason::ZeroSigma);
    const auto cls = classify_tolerance(spec, symmetry_tol);
    switch (cls.kind) {
        case ToleranceKind::UnilateralUpper:
            return IndexValue::defined("Cpk", (*spec.usl() - mu) / (3.0 * sigma));
        case ToleranceKind::UnilateralLower:
            return IndexValue::defined("Cpk", (mu - *spec.lsl()) / (3.0 * sigma));
        case ToleranceKind::BilateralAsymmetric:
            if (respect_target) return starred_result("Cpk", starred_min(spec, mu, sigma));
            [[fallthrough]];
        case ToleranceKind::BilateralSymmetric:
            return IndexValue::defined(
                "Cpk",
                std::min((*spec.usl() - mu) / (3.0 * sigma), (mu - *spec.lsl()) / (3.0 * sigma)));
    }
    raise(Errc::InvalidArgument, "unreachable tolerance kind");
}

IndexValue taguchi_index(const ToleranceSpec& spec, double mu, double sigma,
                         double symmetry_tol) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpm", IndexReason::ZeroSigma);
    if (!spec.has_target()) return IndexValue::undefined("Cpm", IndexReason::NoTarget);
    const double d = taguchi_denominator(mu, sigma, *spec.target());
    const auto cls = classify_tolerance(spec, symmetry_tol);
    switch (cls.kind) {
        case ToleranceKind::BilateralSymmetric:
            return IndexValue::defined("Cpm", spec.range() / (2.0 * d));
        case ToleranceKind::BilateralAsymmetric:
            return IndexValue::defined(
                "Cpm", std::min(*spec.usl() - *spec.target(), *spec.target() - *spec.lsl()) / d);
        case ToleranceKind::UnilateralUpper:
            return IndexValue::defined("Cpm", (*spec.usl() - *spec.target()) / d);
        case ToleranceKind::UnilateralLower:
            return IndexValue::defined("Cpm", (*spec.target() - *spec.lsl()) / d);
    }
    raise(Errc::InvalidArgument, "unreachable tolerance kind");
}

IndexValue taguchi_centering_index(const ToleranceSpec& spec, double mu, double sigma,
                                   double symmetry_tol) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpmk", IndexReason::ZeroSigma);
    if (!spec.has_target()) return IndexValue::undefined("Cpmk", IndexReason::NoTarget);
    const double d = taguchi_denominator(mu, sigma, *spec.target());
    const auto cls = classify_tolerance(spec, symmetry_tol);
    switch (cls.kind) {
        case ToleranceKind::BilateralSymmetric:
            return IndexValue::defined("Cpmk",
                                       std::min(*spec.usl() - mu, mu - *spec.lsl()) / d);
        case ToleranceKind::BilateralAsymmetric: {
            const auto p = starred_min(spec, mu, sigma);
            const double bias = (mu - *spec.target()) / sigma;
            const double scale = std::sqrt(1.0 + bias * bias);
            return p.zero_branch_fired ? IndexValue::zero_clamped("Cpmk")
                                       : IndexValue::defined("Cpmk", p.value / scale);
        }
        case ToleranceKind::UnilateralUpper:
            return IndexValue::defined("Cpmk", (*spec.usl() - mu) / d);
        case ToleranceKind::UnilateralLower:
            return IndexValue::defined("Cpmk", (mu - *spec.lsl()) / d);
    }
    raise(Errc::InvalidArgument, "unreachable tolerance kind");
}

IndexValue starred_potential_index(const ToleranceSpec& spec, double sigma) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cp*", IndexReason::ZeroSigma);
    if (!spec.bilateral()) return IndexValue::undefined("Cp*", IndexReason::UnilateralCpUndefined);
    if (!spec.has_target()) return IndexValue::undefined("Cp*", IndexReason::NoTarget);
    const double t = *spec.target();
    return IndexValue::defined(
        "Cp*", std::min((*spec.usl() - t) / (3.0 * sigma), (t - *spec.lsl()) / (3.0 * sigma)));
}

IndexValue starred_centering_index(const ToleranceSpec& spec, double mu, double sigma) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpk*", IndexReason::ZeroSigma);
    if (!spec.bilateral())
        return IndexValue::undefined("Cpk*", IndexReason::UnilateralCpUndefined);
    if (!spec.has_target()) return IndexValue::undefined("Cpk*", IndexReason::NoTarget);
    return starred_result("Cpk*", starred_min(spec, mu, sigma));
}

IndexValue starred_taguchi_index(const ToleranceSpec& spec, double mu, double sigma) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpm*", IndexReason::ZeroSigma);
    if (!spec.bilateral())
        return IndexValue::undefined("Cpm*", IndexReason::UnilateralCpUndefined);
    if (!spec.has_target()) return IndexValue::undefined("Cpm*", IndexReason::NoTarget);
    const double t = *spec.target();
    const double d = taguchi_denominator(mu, sigma, t);
    return IndexValue::defined("Cpm*", std::min(*spec.usl() - t, t - *spec.lsl()) / d);
}

IndexValue starred_taguchi_centering_index(const ToleranceSpec& spec, double mu, double sigma) {
    if (zero_sigma(sigma)) return IndexValue::undefined("Cpmk*", IndexReason::ZeroSigma);
    if (!spec.bilateral())
        return IndexValue::undefined("Cpmk*", IndexReason::UnilateralCpUndefined);
    if (!spec.has_target()) return IndexValue::undefined("Cpmk*", IndexReason::NoTarget);
    const auto p = starred_min(spec, mu, sigma);
    if (p.zero_branch_fired) return IndexValue::zero_clamped("Cpmk*");
    const double bias = (mu - *spec.target()) / sigma;
    return IndexValue::defined("Cpmk*", p.value / std::sqrt(1.0 + bias * bias));
}

std::vector<IndexValue> nonnormal_indices(const ToleranceSpec& spec, const QuantileTriple& q,
                                          double symmetry_tol) {
    if (!q.strict())
        raise(Errc::DegenerateQuantiles, "quantile triple must be strictly increasing");
    const auto cls = classify_tolerance(spec, symmetry_tol);
    const double span = q.p99865 - q.p00135;
    const bool has_t = spec.has_target();
    const double half_span = span / 6.0;
    const double taguchi_d =
        has_t ? 3.0 * std::sqrt(half_span * half_span +
                                (q.p50 - *spec.target()) * (q.p50 - *spec.target()))
              : 0.0;

    std::vector<IndexValue> out;
    out.reserve(4);

    if (spec.bilateral()) {
        out.push_back(IndexValue::defined("CNp", spec.range() / span));
        out.push_back(IndexValue::defined(
            "CNpk", std::min((*spec.usl() - q.p50) / (q.p99865 - q.p50),
                             (q.p50 - *spec.lsl()) / (q.p50 - q.p00135))));
        if (has_t) {
            out.push_back(IndexValue::defined("CNpm", spec.range() / (2.0 * taguchi_d)));
            out.push_back(IndexValue::defined(
                "CNpmk", std::min(*spec.usl() - q.p50, q.p50 - *spec.lsl()) / taguchi_d));
        } else {
            out.push_back(IndexValue::undefined("CNpm", IndexReason::NoTarget));
            out.push_back(IndexValue::undefined("CNpmk", IndexReason::NoTarget));
        }
        return out;
    }

    out.push_back(IndexValue::undefined("CNp", IndexReason::UnilateralCpUndefined));
    if (cls.kind == ToleranceKind::UnilateralUpper) {
        out.push_back(
            IndexValue::defined("CNpk", (*spec.usl() - q.p50) / (q.p99865 - q.p50)));
        if (has_t) {
            out.push_back(IndexValue::defined("CNpm", (*spec.usl() - *spec.target()) / taguchi_d));
            out.push_back(IndexValue::defined("CNpmk", (*spec.usl() - q.p50) / taguchi_d));
        }
    } else {
        out.push_back(
            IndexValue::defined("CNpk", (q.p50 - *spec.lsl()) / (q.p50 - q.p00135)));
        if (has_t) {
            out.push_back(IndexValue::defined("CNpm", (*spec.target() - *spec.lsl()) / taguchi_d));
            out.push_back(IndexValue::defined("CNpmk", (q.p50 - *spec.lsl()) / taguchi_d));
        }
    }
    if (!has_t) {
        out.push_back(IndexValue::undefined("CNpm", IndexReason::NoTarget));
        out.push_back(IndexValue::undefined("CNpmk", IndexReason::NoTarget));
    }
    return out;
}

double ppm_nonconforming(const DistributionFit& fit, const ToleranceSpec& spec) {
    double nonconforming = 0.0;
    if (spec.lsl()) nonconforming += cdf(fit, *spec.lsl());
    if (spec.usl()) nonconforming += 1.0 - cdf(fit, *spec.usl());
    return 1e6 * nonconforming;
}

} // namespace procap
