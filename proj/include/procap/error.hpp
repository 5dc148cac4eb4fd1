#pragma once

#include <stdexcept>
#include <string>

namespace procap {

// Machine-readable failure codes carried by every procap::Error.
enum class Errc {
    InvalidTolerance,
    InvalidSeries,
    TooFewSamples,
    ConstantSeries,
    DegenerateRange,
    SubgroupNotOne,
    SubgroupTooSmall,
    SubgroupOutOfTable,
    WindowOutOfRange,
    OutOfTable,
    GroupTooSmall,
    SupportViolation,
    DegenerateData,
    NonConvergence,
    NoFamilyFits,
    DegenerateQuantiles,
    EmptyInput,
    MissingToleranceRow,
    NonNumericCell,
    DuplicateDimensionId,
    InvalidArgument,
    IoFailure,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace procap
