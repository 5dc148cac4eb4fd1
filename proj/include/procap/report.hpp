#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procap/distfit.hpp"
#include "procap/indices.hpp"
#include "procap/screening.hpp"
#include "procap/types.hpp"

namespace procap {

/// One workflow decision: which node ran, what it evaluated, which branch
/// was taken. Traces are deterministic for identical inputs and config.
struct TraceEntry {
    std::string node;
    std::string predicate;
    std::string branch;
};

/// Everything the analysis produced for one dimension. `error` is set when
/// the workflow hit a terminal condition; the trace then ends with an
/// "error" node and whatever was computed before the failure is kept.
struct CapabilityReport {
    std::string dimension_id;
    int n = 0;
    double mean = 0.0;
    SigmaEstimate sigma_overall{SigmaMethod::Overall, std::nullopt, 0.0};
    SigmaEstimate sigma_within{SigmaMethod::AMR, 2, 0.0};
    std::optional<OutlierReport> outliers;
    std::optional<NormalityResult> normality;
    std::optional<DistributionFit> best_fit;
    std::optional<QuantileTriple> quantiles;
    std::vector<IndexValue> indices;
    std::vector<TraceEntry> trace;
    std::optional<std::string> error;

    const IndexValue* find_index(const std::string& name) const;
};

/// Fixed column order for the flattened CSV serialization; every report row
/// carries all of these names (empty cell + reason when undefined).
const std::vector<std::string>& canonical_index_names();

} // namespace procap
