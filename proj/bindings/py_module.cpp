#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "procap/dataset_io.hpp"
#include "procap/workflow.hpp"

namespace py = pybind11;
using namespace procap;

namespace {

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

} // namespace

PYBIND11_MODULE(_procap, m) {
    m.doc() = "Process-capability analysis core: screening, distribution fitting, "
              "sigma estimation, capability indices, and the decision workflow.";

    py::register_exception<Error>(m, "ProcapError", PyExc_ValueError);

    py::enum_<ToleranceKind>(m, "ToleranceKind")
        .value("BilateralSymmetric", ToleranceKind::BilateralSymmetric)
        .value("BilateralAsymmetric", ToleranceKind::BilateralAsymmetric)
        .value("UnilateralUpper", ToleranceKind::UnilateralUpper)
        .value("UnilateralLower", ToleranceKind::UnilateralLower);

    py::enum_<SigmaMethod>(m, "SigmaMethod")
        .value("Overall", SigmaMethod::Overall)
        .value("AMR", SigmaMethod::AMR)
        .value("MMR", SigmaMethod::MMR)
        .value("SRMSSD", SigmaMethod::SRMSSD)
        .value("Rbar", SigmaMethod::Rbar)
        .value("Sbar", SigmaMethod::Sbar)
        .value("Pooled", SigmaMethod::Pooled);

    py::enum_<ChartConstant>(m, "ChartConstant")
        .value("d2", ChartConstant::d2)
        .value("c4", ChartConstant::c4)
        .value("d3", ChartConstant::d3)
        .value("d4", ChartConstant::d4);

    py::enum_<Family>(m, "Family")
        .value("Normal", Family::Normal)
        .value("LogNormal", Family::LogNormal)
        .value("Exponential", Family::Exponential)
        .value("Gamma", Family::Gamma)
        .value("Weibull2p", Family::Weibull2p)
        .value("Weibull3p", Family::Weibull3p);

    py::enum_<Criterion>(m, "Criterion")
        .value("AIC", Criterion::AIC)
        .value("BIC", Criterion::BIC)
        .value("AICc", Criterion::AICc);

    py::enum_<OutlierMethod>(m, "OutlierMethod")
        .value("TukeyFence", OutlierMethod::TukeyFence)
        .value("Grubbs", OutlierMethod::Grubbs);

    py::enum_<OutlierAction>(m, "OutlierAction")
        .value("Flag", OutlierAction::Flag)
        .value("Exclude", OutlierAction::Exclude);

    py::enum_<WorkflowMode>(m, "WorkflowMode")
        .value("Full", WorkflowMode::Full)
        .value("Simplified", WorkflowMode::Simplified);

    py::enum_<IndexReason>(m, "IndexReason")
        .value("UnilateralCpUndefined", IndexReason::UnilateralCpUndefined)
        .value("NoTarget", IndexReason::NoTarget)
        .value("ZeroSigma", IndexReason::ZeroSigma)
        .value("DegenerateQuantiles", IndexReason::DegenerateQuantiles)
        .value("ZeroBeyondHalfTolerance", IndexReason::ZeroBeyondHalfTolerance);

    py::class_<ToleranceSpec>(m, "ToleranceSpec")
        .def(py::init<std::optional<double>, std::optional<double>, std::optional<double>>(),
             py::arg("lsl") = std::nullopt, py::arg("usl") = std::nullopt,
             py::arg("target") = std::nullopt)
        .def_property_readonly("lsl", &ToleranceSpec::lsl)
        .def_property_readonly("usl", &ToleranceSpec::usl)
        .def_property_readonly("target", &ToleranceSpec::target)
        .def_property_readonly("bilateral", &ToleranceSpec::bilateral)
        .def("__repr__", [](const ToleranceSpec& s) {
            auto opt = [](const std::optional<double>& v) {
                return v ? std::to_string(*v) : std::string("None");
            };
            return "ToleranceSpec(lsl=" + opt(s.lsl()) + ", usl=" + opt(s.usl()) +
                   ", target=" + opt(s.target()) + ")";
        });

    py::class_<ToleranceClass>(m, "ToleranceClass")
        .def_readonly("kind", &ToleranceClass::kind)
        .def_readonly("has_target", &ToleranceClass::has_target);

    m.def("classify_tolerance", &classify_tolerance, py::arg("spec"),
          py::arg("symmetry_tol") = kDefaultSymmetryTol);

    py::class_<MeasurementSeries>(m, "MeasurementSeries")
        .def(py::init<std::vector<double>, int>(), py::arg("values"),
             py::arg("subgroup_size") = 1)
        .def_property_readonly("values",
                               [](const MeasurementSeries& s) { return as_vector(s.values()); })
        .def_property_readonly("subgroup_size", &MeasurementSeries::subgroup_size)
        .def("__len__", &MeasurementSeries::size);

    py::class_<SigmaEstimate>(m, "SigmaEstimate")
        .def_readonly("method", &SigmaEstimate::method)
        .def_readonly("window", &SigmaEstimate::window)
        .def_readonly("value", &SigmaEstimate::value)
        .def("__repr__", [](const SigmaEstimate& e) {
            return "SigmaEstimate(" + std::string(to_string(e.method)) +
                   (e.window ? " w=" + std::to_string(*e.window) : "") +
                   ", value=" + std::to_string(e.value) + ")";
        });

    py::class_<QuantileTriple>(m, "QuantileTriple")
        .def(py::init<double, double, double>(), py::arg("p00135"), py::arg("p50"),
             py::arg("p99865"))
        .def_readonly("p00135", &QuantileTriple::p00135)
        .def_readonly("p50", &QuantileTriple::p50)
        .def_readonly("p99865", &QuantileTriple::p99865);

    m.def("control_chart_constant", &control_chart_constant, py::arg("name"), py::arg("w"));
    m.def("c4_analytic", &c4_analytic, py::arg("n"));
    m.def("overall_sigma", &overall_sigma, py::arg("series"));
    m.def("within_sigma_amr", &within_sigma_amr, py::arg("series"), py::arg("w") = 2);
    m.def("within_sigma_mmr", &within_sigma_mmr, py::arg("series"), py::arg("w") = 2);
    m.def(
        "within_sigma_srmssd",
        [](const MeasurementSeries& s, bool unbias) {
            return within_sigma_srmssd(s, unbias ? SrmssdUnbias::C4 : SrmssdUnbias::None);
        },
        py::arg("series"), py::arg("unbias") = true);
    m.def("within_sigma_rbar", &within_sigma_rbar, py::arg("series"));
    m.def("within_sigma_sbar", &within_sigma_sbar, py::arg("series"));
    m.def("within_sigma_pooled", &within_sigma_pooled, py::arg("series"));
    m.def(
        "pooled_sigma",
        [](const std::vector<std::vector<double>>& groups) { return pooled_sigma(groups); },
        py::arg("groups"));

    py::class_<FlaggedValue>(m, "FlaggedValue")
        .def_readonly("index", &FlaggedValue::index)
        .def_readonly("value", &FlaggedValue::value);

    py::class_<OutlierReport>(m, "OutlierReport")
        .def_readonly("method", &OutlierReport::method)
        .def_readonly("flagged", &OutlierReport::flagged);

    m.def(
        "detect_outliers",
        [](const MeasurementSeries& series, OutlierMethod method, double tukey_k,
           double grubbs_alpha) {
            return detect_outliers(series, method, {tukey_k, grubbs_alpha});
        },
        py::arg("series"), py::arg("method") = OutlierMethod::TukeyFence,
        py::arg("tukey_k") = 1.5, py::arg("grubbs_alpha") = 0.05);

    py::class_<NormalityResult>(m, "NormalityResult")
        .def_readonly("a2", &NormalityResult::a2)
        .def_readonly("a2_star", &NormalityResult::a2_star)
        .def_readonly("p_value", &NormalityResult::p_value)
        .def_readonly("alpha", &NormalityResult::alpha)
        .def_readonly("passed", &NormalityResult::passed);

    m.def("anderson_darling_normality", &anderson_darling_normality, py::arg("series"),
          py::arg("alpha") = 0.05);

    py::class_<InformationCriteria>(m, "InformationCriteria")
        .def_readonly("aic", &InformationCriteria::aic)
        .def_readonly("bic", &InformationCriteria::bic)
        .def_readonly("aicc", &InformationCriteria::aicc);

    m.def("information_criteria", &information_criteria, py::arg("loglik"), py::arg("k"),
          py::arg("n"));

    py::class_<DistributionFit>(m, "DistributionFit")
        .def_readonly("family", &DistributionFit::family)
        .def_readonly("params", &DistributionFit::params)
        .def_readonly("n", &DistributionFit::n)
        .def_readonly("loglik", &DistributionFit::loglik)
        .def_readonly("aic", &DistributionFit::aic)
        .def_readonly("bic", &DistributionFit::bic)
        .def_readonly("aicc", &DistributionFit::aicc);

    py::class_<ExcludedFamily>(m, "ExcludedFamily")
        .def_readonly("family", &ExcludedFamily::family)
        .def_readonly("detail", &ExcludedFamily::detail);

    py::class_<RankedFits>(m, "RankedFits")
        .def_readonly("fits", &RankedFits::fits)
        .def_readonly("criterion", &RankedFits::criterion)
        .def_readonly("excluded", &RankedFits::excluded)
        .def_property_readonly("best", [](const RankedFits& r) { return r.best(); });

    m.def("fit_distribution", &fit_distribution, py::arg("series"), py::arg("family"));
    m.def("select_best_distribution", &select_best_distribution, py::arg("series"),
          py::arg("candidates"), py::arg("criterion") = Criterion::AICc);
    m.def("cdf", &cdf, py::arg("fit"), py::arg("x"));
    m.def("pdf", &pdf, py::arg("fit"), py::arg("x"));
    m.def("quantile", &quantile, py::arg("fit"), py::arg("p"));
    m.def("quantile_triple", &quantile_triple, py::arg("fit"));
    m.def(
        "empirical_quantile",
        [](const std::vector<double>& values, double p) { return empirical_quantile(values, p); },
        py::arg("values"), py::arg("p"));

    py::class_<IndexValue>(m, "IndexValue")
        .def_readonly("name", &IndexValue::name)
        .def_readonly("value", &IndexValue::value)
        .def_readonly("reason", &IndexValue::reason)
        .def("__repr__", [](const IndexValue& iv) {
            return "IndexValue(" + iv.name + "=" +
                   (iv.value ? std::to_string(*iv.value) : "undefined") +
                   (iv.reason ? std::string(", reason=") + to_string(*iv.reason) : "") + ")";
        });

    m.def("potential_index", &potential_index, py::arg("spec"), py::arg("sigma"),
          py::arg("symmetry_tol") = kDefaultSymmetryTol);
    m.def("centering_index", &centering_index, py::arg("spec"), py::arg("mu"), py::arg("sigma"),
          py::arg("respect_target") = false, py::arg("symmetry_tol") = kDefaultSymmetryTol);
    m.def("taguchi_index", &taguchi_index, py::arg("spec"), py::arg("mu"), py::arg("sigma"),
          py::arg("symmetry_tol") = kDefaultSymmetryTol);
    m.def("taguchi_centering_index", &taguchi_centering_index, py::arg("spec"), py::arg("mu"),
          py::arg("sigma"), py::arg("symmetry_tol") = kDefaultSymmetryTol);
    m.def("starred_potential_index", &starred_potential_index, py::arg("spec"), py::arg("sigma"));
    m.def("starred_centering_index", &starred_centering_index, py::arg("spec"), py::arg("mu"),
          py::arg("sigma"));
    m.def("starred_taguchi_index", &starred_taguchi_index, py::arg("spec"), py::arg("mu"),
          py::arg("sigma"));
    m.def("starred_taguchi_centering_index", &starred_taguchi_centering_index, py::arg("spec"),
          py::arg("mu"), py::arg("sigma"));
    m.def("nonnormal_indices", &nonnormal_indices, py::arg("spec"), py::arg("quantiles"),
          py::arg("symmetry_tol") = kDefaultSymmetryTol);
    m.def("ppm_nonconforming", &ppm_nonconforming, py::arg("fit"), py::arg("spec"));

    py::class_<Dimension>(m, "Dimension")
        .def_readonly("id", &Dimension::id)
        .def_readonly("spec", &Dimension::spec)
        .def_readonly("series", &Dimension::series);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("dimensions", &Dataset::dimensions)
        .def("__len__", [](const Dataset& d) { return d.dimensions.size(); });

    m.def("parse_dataset", [](const std::string& csv) { return parse_dataset(csv); },
          py::arg("csv"));
    m.def("emit_dataset_csv", &emit_dataset_csv, py::arg("dataset"));

    py::class_<WorkflowConfig>(m, "WorkflowConfig")
        .def(py::init<>())
        .def_readwrite("mode", &WorkflowConfig::mode)
        .def_readwrite("alpha", &WorkflowConfig::alpha)
        .def_readwrite("outlier_method", &WorkflowConfig::outlier_method)
        .def_readwrite("outlier_action", &WorkflowConfig::outlier_action)
        .def_readwrite("criterion", &WorkflowConfig::criterion)
        .def_readwrite("candidates", &WorkflowConfig::candidates)
        .def_readwrite("symmetry_tol", &WorkflowConfig::symmetry_tol)
        .def("set_sigma_override",
             [](WorkflowConfig& c, SigmaMethod method, std::optional<int> window) {
                 c.sigma_override = SigmaChoice{method, window};
             },
             py::arg("method"), py::arg("window") = std::nullopt);

    py::class_<TraceEntry>(m, "TraceEntry")
        .def_readonly("node", &TraceEntry::node)
        .def_readonly("predicate", &TraceEntry::predicate)
        .def_readonly("branch", &TraceEntry::branch);

    py::class_<CapabilityReport>(m, "CapabilityReport")
        .def_readonly("dimension_id", &CapabilityReport::dimension_id)
        .def_readonly("n", &CapabilityReport::n)
        .def_readonly("mean", &CapabilityReport::mean)
        .def_readonly("sigma_overall", &CapabilityReport::sigma_overall)
        .def_readonly("sigma_within", &CapabilityReport::sigma_within)
        .def_readonly("outliers", &CapabilityReport::outliers)
        .def_readonly("normality", &CapabilityReport::normality)
        .def_readonly("best_fit", &CapabilityReport::best_fit)
        .def_readonly("quantiles", &CapabilityReport::quantiles)
        .def_readonly("indices", &CapabilityReport::indices)
        .def_readonly("trace", &CapabilityReport::trace)
        .def_readonly("error", &CapabilityReport::error)
        .def("index",
             [](const CapabilityReport& r, const std::string& name) -> std::optional<IndexValue> {
                 const auto* iv = r.find_index(name);
                 if (!iv) return std::nullopt;
                 return *iv;
             },
             py::arg("name"))
        .def("to_json",
             [](const CapabilityReport& r) { return emit_report(r, ReportFormat::Json); })
        .def("to_csv_row",
             [](const CapabilityReport& r) { return emit_report(r, ReportFormat::CsvRow); });

    m.def("report_csv_header", &report_csv_header);
    m.def("analyze_dimension", &analyze_dimension, py::arg("id"), py::arg("spec"),
          py::arg("series"), py::arg("config") = WorkflowConfig{});
    m.def("analyze_dataset", &analyze_dataset, py::arg("dataset"),
          py::arg("config") = WorkflowConfig{});

    py::class_<SummaryBin>(m, "SummaryBin")
        .def_readonly("lo", &SummaryBin::lo)
        .def_readonly("hi", &SummaryBin::hi)
        .def_readonly("count", &SummaryBin::count)
        .def_readonly("pct", &SummaryBin::pct)
        .def_readonly("pct_cum", &SummaryBin::pct_cum);

    py::class_<BatchSummary>(m, "BatchSummary")
        .def_readonly("bins", &BatchSummary::bins)
        .def_readonly("min", &BatchSummary::min)
        .def_readonly("max", &BatchSummary::max)
        .def_readonly("ratio_mode", &BatchSummary::ratio_mode);

    m.def("default_summary_edges", &default_summary_edges);
    m.def(
        "batch_summary",
        [](const std::vector<double>& values, const std::vector<double>& edges,
           const std::string& mode) { return batch_summary(values, edges, mode); },
        py::arg("values_percent"), py::arg("bin_edges_percent"), py::arg("ratio_mode") = "");
    m.def("sigma_relative_error", &sigma_relative_error, py::arg("series"), py::arg("family"));

    m.def(
        "emit_histogram_svg",
        [](const MeasurementSeries& series, std::optional<ToleranceSpec> spec,
           std::optional<QuantileTriple> q, const std::string& title) {
            return emit_histogram_svg(series, spec ? &*spec : nullptr, q ? &*q : nullptr, title);
        },
        py::arg("series"), py::arg("spec") = std::nullopt, py::arg("quantiles") = std::nullopt,
        py::arg("title") = "");
    m.def(
        "emit_ratio_histogram_svg",
        [](const std::vector<double>& ratios, double lo, double hi, const std::string& title) {
            return emit_ratio_histogram_svg(ratios, lo, hi, title);
        },
        py::arg("ratios"), py::arg("lo_limit"), py::arg("hi_limit"), py::arg("title") = "");

    m.attr("__version__") = "0.1.0";
}
