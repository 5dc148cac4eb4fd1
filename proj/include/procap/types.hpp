#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procap/error.hpp"

namespace procap {

/// Engineering tolerance: at least one specification limit, optionally a
/// target (nominal) value. Invariants are enforced at construction.
class ToleranceSpec {
public:
    ToleranceSpec(std::optional<double> lsl,
                  std::optional<double> usl,
                  std::optional<double> target = std::nullopt);

    const std::optional<double>& lsl() const noexcept { return lsl_; }
    const std::optional<double>& usl() const noexcept { return usl_; }
    const std::optional<double>& target() const noexcept { return target_; }

    bool bilateral() const noexcept { return lsl_ && usl_; }
    bool has_target() const noexcept { return target_.has_value(); }

    /// Midpoint M = (USL+LSL)/2; only meaningful for bilateral specs.
    double midpoint() const;
    /// Tolerance range USL-LSL; only meaningful for bilateral specs.
    double range() const;

    bool operator==(const ToleranceSpec&) const = default;

private:
    std::optional<double> lsl_;
    std::optional<double> usl_;
    std::optional<double> target_;
};

enum class ToleranceKind {
    BilateralSymmetric,
    BilateralAsymmetric,
    UnilateralUpper,
    UnilateralLower,
};

const char* to_string(ToleranceKind kind) noexcept;

struct ToleranceClass {
    ToleranceKind kind;
    bool has_target;

    bool operator==(const ToleranceClass&) const = default;
};

inline constexpr double kDefaultSymmetryTol = 1e-9;

/// Pure classification of a valid spec. A bilateral spec with a target is
/// asymmetric when |T - M| exceeds symmetry_tol relative to the range.
ToleranceClass classify_tolerance(const ToleranceSpec& spec,
                                  double symmetry_tol = kDefaultSymmetryTol);

/// Temporally ordered observations with a subgroup layout. subgroup_size 1
/// means individuals data. Order is preserved end-to-end; nothing here sorts.
class MeasurementSeries {
public:
    MeasurementSeries(std::vector<double> values, int subgroup_size = 1);

    std::span<const double> values() const noexcept { return values_; }
    int subgroup_size() const noexcept { return subgroup_size_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }
    int subgroup_count() const noexcept { return size() / subgroup_size_; }

    std::span<const double> subgroup(int index) const;

    bool operator==(const MeasurementSeries&) const = default;

private:
    std::vector<double> values_;
    int subgroup_size_;
};

enum class SigmaMethod { Overall, AMR, MMR, SRMSSD, Rbar, Sbar, Pooled };

const char* to_string(SigmaMethod method) noexcept;

/// A standard-deviation value tagged with how it was obtained. window is
/// present exactly for the moving-range methods (AMR, MMR).
struct SigmaEstimate {
    SigmaMethod method;
    std::optional<int> window;
    double value;
};

/// The P0.135 / P50 / P99.865 percentiles used by the non-normal indices.
struct QuantileTriple {
    double p00135;
    double p50;
    double p99865;

    bool strict() const noexcept { return p00135 < p50 && p50 < p99865; }
};

} // namespace procap
