#include "procap/types.hpp"

#include <cmath>

namespace procap {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidTolerance: return "InvalidTolerance";
        case Errc::InvalidSeries: return "InvalidSeries";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::ConstantSeries: return "ConstantSeries";
        case Errc::DegenerateRange: return "DegenerateRange";
        case Errc::SubgroupNotOne: return "SubgroupNotOne";
        case Errc::SubgroupTooSmall: return "SubgroupTooSmall";
        case Errc::SubgroupOutOfTable: return "SubgroupOutOfTable";
        case Errc::WindowOutOfRange: return "WindowOutOfRange";
        case Errc::OutOfTable: return "OutOfTable";
        case Errc::GroupTooSmall: return "GroupTooSmall";
        case Errc::SupportViolation: return "SupportViolation";
        case Errc::DegenerateData: return "DegenerateData";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::NoFamilyFits: return "NoFamilyFits";
        case Errc::DegenerateQuantiles: return "DegenerateQuantiles";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::MissingToleranceRow: return "MissingToleranceRow";
        case Errc::NonNumericCell: return "NonNumericCell";
        case Errc::DuplicateDimensionId: return "DuplicateDimensionId";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

ToleranceSpec::ToleranceSpec(std::optional<double> lsl, std::optional<double> usl,
                             std::optional<double> target)
    : lsl_(lsl), usl_(usl), target_(target) {
    if (!lsl_ && !usl_)
        raise(Errc::InvalidTolerance, "tolerance needs at least one specification limit");
    for (const auto& v : {lsl_, usl_, target_})
        if (v && !std::isfinite(*v))
            raise(Errc::InvalidTolerance, "tolerance values must be finite");
    if (lsl_ && usl_ && !(*lsl_ < *usl_))
        raise(Errc::InvalidTolerance, "lsl must be strictly below usl");
    if (target_ && lsl_ && usl_ && (*target_ < *lsl_ || *target_ > *usl_))
        raise(Errc::InvalidTolerance, "target must lie within [lsl, usl]");
}

double ToleranceSpec::midpoint() const {
    if (!bilateral())
        raise(Errc::InvalidTolerance, "midpoint needs both limits");
    return 0.5 * (*lsl_ + *usl_);
}

double ToleranceSpec::range() const {
    if (!bilateral())
        raise(Errc::InvalidTolerance, "range needs both limits");
    return *usl_ - *lsl_;
}

const char* to_string(ToleranceKind kind) noexcept {
    switch (kind) {
        case ToleranceKind::BilateralSymmetric: return "BilateralSymmetric";
        case ToleranceKind::BilateralAsymmetric: return "BilateralAsymmetric";
        case ToleranceKind::UnilateralUpper: return "UnilateralUpper";
        case ToleranceKind::UnilateralLower: return "UnilateralLower";
    }
    return "Unknown";
}

ToleranceClass classify_tolerance(const ToleranceSpec& spec, double symmetry_tol) {
    const bool has_target = spec.has_target();
    if (!spec.bilateral()) {
        return {spec.usl() ? ToleranceKind::UnilateralUpper : ToleranceKind::UnilateralLower,
                has_target};
    }
    if (!has_target)
        return {ToleranceKind::BilateralSymmetric, false};
    const double offset = std::abs(*spec.target() - spec.midpoint());
    const bool symmetric = offset <= symmetry_tol * spec.range();
    return {symmetric ? ToleranceKind::BilateralSymmetric : ToleranceKind::BilateralAsymmetric,
            true};
}

MeasurementSeries::MeasurementSeries(std::vector<double> values, int subgroup_size)
    : values_(std::move(values)), subgroup_size_(subgroup_size) {
    if (values_.size() < 2)
        raise(Errc::InvalidSeries, "a series needs at least 2 observations");
    for (double v : values_)
        if (!std::isfinite(v))
            raise(Errc::InvalidSeries, "observations must be finite");
    if (subgroup_size_ < 1)
        raise(Errc::InvalidSeries, "subgroup_size must be >= 1");
    if (subgroup_size_ > 1 && values_.size() % static_cast<size_t>(subgroup_size_) != 0)
        raise(Errc::InvalidSeries, "trailing partial subgroup rejected");
}

std::span<const double> MeasurementSeries::subgroup(int index) const {
    if (index < 0 || index >= subgroup_count())
        raise(Errc::InvalidArgument, "subgroup index out of range");
    return std::span<const double>(values_).subspan(
        static_cast<size_t>(index) * subgroup_size_, subgroup_size_);
}

const char* to_string(SigmaMethod method) noexcept {
    switch (method) {
        case SigmaMethod::Overall: return "Overall";
        case SigmaMethod::AMR: return "AMR";
        case SigmaMethod::MMR: return "MMR";
        case SigmaMethod::SRMSSD: return "SRMSSD";
        case SigmaMethod::Rbar: return "Rbar";
        case SigmaMethod::Sbar: return "Sbar";
        case SigmaMethod::Pooled: return "Pooled";
    }
    return "Unknown";
}

} // namespace procap
