#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procap/distfit.hpp"
#include "procap/types.hpp"

namespace procap {

enum class IndexReason {
    UnilateralCpUndefined,
    NoTarget,
    ZeroSigma,
    DegenerateQuantiles,
    ZeroBeyondHalfTolerance,
};

/// Serialized reason codes (stable wire names).
const char* to_string(IndexReason reason) noexcept;

/// One named index: either a computed value or a reason it is undefined.
/// ZeroBeyondHalfTolerance is the one case carrying both (value == 0).
struct IndexValue {
    std::string name;
    std::optional<double> value;
    std::optional<IndexReason> reason;

    static IndexValue defined(std::string name, double value) {
        return {std::move(name), value, std::nullopt};
    }
    static IndexValue undefined(std::string name, IndexReason reason) {
        return {std::move(name), std::nullopt, reason};
    }
    static IndexValue zero_clamped(std::string name) {
        return {std::move(name), 0.0, IndexReason::ZeroBeyondHalfTolerance};
    }
};

/// Cp family: (USL-LSL)/(6σ) for symmetric bilateral specs, the target-based
/// min form for asymmetric ones, undefined for unilateral tolerances.
/// Passing σ_overall yields Pp under the same branch rules.
IndexValue potential_index(const ToleranceSpec& spec, double sigma,
                           double symmetry_tol = kDefaultSymmetryTol);

/// Cpk family. respect_target=false uses the plain min-distance form for any
/// bilateral spec; respect_target=true applies the starred piecewise form
/// (with its zero branches) when the spec is asymmetric. Unilateral specs get
/// the one-sided Cpu/Cpl. Negative results are reported as computed.
IndexValue centering_index(const ToleranceSpec& spec, double mu, double sigma,
                           bool respect_target = false,
                           double symmetry_tol = kDefaultSymmetryTol);

/// Cpm family; requires a target. Denominator 3*sqrt(σ² + (μ-T)²).
IndexValue taguchi_index(const ToleranceSpec& spec, double mu, double sigma,
                         double symmetry_tol = kDefaultSymmetryTol);

/// Cpmk family; requires a target.
IndexValue taguchi_centering_index(const ToleranceSpec& spec, double mu, double sigma,
                                   double symmetry_tol = kDefaultSymmetryTol);

/// Target-based starred variants, defined for any bilateral spec with a
/// target (they reduce to the plain values when T = M). Cpk* and Cpmk* carry
/// the piecewise zero branches, reported as value 0 with
/// ZeroBeyondHalfTolerance when |T-μ| exceeds the binding half-tolerance.
IndexValue starred_potential_index(const ToleranceSpec& spec, double sigma);
IndexValue starred_centering_index(const ToleranceSpec& spec, double mu, double sigma);
IndexValue starred_taguchi_index(const ToleranceSpec& spec, double mu, double sigma);
IndexValue starred_taguchi_centering_index(const ToleranceSpec& spec, double mu, double sigma);

/// Percentile-based CNp/CNpk/CNpm/CNpmk for one spec; entries that need an
/// absent target (or a bilateral range) come back undefined with a reason.
std::vector<IndexValue> nonnormal_indices(const ToleranceSpec& spec, const QuantileTriple& q,
                                          double symmetry_tol = kDefaultSymmetryTol);

/// Expected fallout in parts per million from the fitted tail mass outside
/// the limits; absent limits contribute nothing.
double ppm_nonconforming(const DistributionFit& fit, const ToleranceSpec& spec);

} // namespace procap
