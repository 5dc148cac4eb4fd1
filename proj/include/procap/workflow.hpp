#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procap/dataset.hpp"
#include "procap/report.hpp"
#include "procap/sigma.hpp"

namespace procap {

enum class WorkflowMode { Full, Simplified };
enum class OutlierAction { Flag, Exclude };

const char* to_string(WorkflowMode mode) noexcept;
const char* to_string(OutlierAction action) noexcept;

struct WorkflowConfig {
    WorkflowMode mode = WorkflowMode::Full;
    double alpha = 0.05;
    std::optional<OutlierMethod> outlier_method = OutlierMethod::TukeyFence;  // nullopt = off
    OutlierParams outlier_params{};
    OutlierAction outlier_action = OutlierAction::Flag;
    std::optional<SigmaChoice> sigma_override;
    SrmssdUnbias srmssd_unbias = SrmssdUnbias::C4;
    Criterion criterion = Criterion::AICc;
    std::vector<Family> candidates = {Family::Normal, Family::LogNormal, Family::Exponential,
                                      Family::Gamma, Family::Weibull2p, Family::Weibull3p};
    double symmetry_tol = kDefaultSymmetryTol;
};

/// Runs the full per-dimension decision workflow: outlier screen, normality
/// gate, then either the normal path (σ selection + the normal index family)
/// or the non-normal path (best-fit distribution, percentile triple,
/// CN-family indices, ppm fallout). Failures become terminal trace entries,
/// never exceptions.
CapabilityReport analyze_dimension(const std::string& id, const ToleranceSpec& spec,
                                   const MeasurementSeries& series,
                                   const WorkflowConfig& config = {});

/// analyze_dimension over every dimension; report order matches dataset
/// order and per-dimension errors stay isolated.
std::vector<CapabilityReport> analyze_dataset(const Dataset& dataset,
                                              const WorkflowConfig& config = {});

struct SummaryBin {
    double lo;      // percent, inclusive
    double hi;      // percent, exclusive (+inf for the last bin)
    int count;
    double pct;
    double pct_cum;
};

struct BatchSummary {
    std::vector<SummaryBin> bins;
    double min;
    double max;
    std::string ratio_mode;
};

/// Default half-open percent bins used by the relative-error summary.
std::vector<double> default_summary_edges();

/// Half-open binning of percent values with percentages and a cumulative
/// column ending at 100.
BatchSummary batch_summary(std::span<const double> values_percent,
                           std::span<const double> bin_edges_percent,
                           const std::string& ratio_mode = "");

/// |mean of σ_w over windows 2..10 for one moving-range family − σ_overall|
/// / σ_overall, as a plain ratio.
double sigma_relative_error(const MeasurementSeries& series, SigmaMethod family);

} // namespace procap
