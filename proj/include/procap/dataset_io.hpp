#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "procap/dataset.hpp"
#include "procap/report.hpp"

namespace procap {

/// Parses the case-study CSV layout: header `NO.` + dimension ids, labeled
/// rows `T`, `Tol+`, `Tol-`, then numbered sample rows in temporal order.
/// Tolerances convert as lsl = T - Tol-, usl = T + Tol+; a zero leg drops
/// that limit (unilateral spec). Empty trailing cells allow ragged lengths.
Dataset parse_dataset(std::string_view csv);

/// Canonical CSV writer; parse(emit(parse(x))) == parse(x). Numbers use the
/// shortest round-trip decimal form.
std::string emit_dataset_csv(const Dataset& dataset);

enum class ReportFormat { Json, CsvRow };

/// JSON object with stable field names, or one flattened CSV row. CSV values
/// are rounded to 3 decimals; undefined indices serialize as an empty value
/// cell plus their reason code. Byte-identical for identical reports.
std::string emit_report(const CapabilityReport& report, ReportFormat format);

/// Header row matching emit_report's CSV-row column order.
std::string report_csv_header();

/// JSON array of reports (the `analyze` subcommand payload).
std::string emit_reports_json(std::span<const CapabilityReport> reports);

/// Histogram + kernel-density SVG with labeled vertical markers for
/// LSL/USL/target, the sample mean and median, and (when given) the fitted
/// P0.135/P50/P99.865 in place of the empirical median. Deterministic bytes
/// for fixed input. Throws DegenerateRange when all values are equal.
std::string emit_histogram_svg(const MeasurementSeries& series, const ToleranceSpec* spec,
                               const QuantileTriple* quantiles = nullptr,
                               const std::string& title = "");

/// Ratio-histogram variant with dashed markers at the two ratio limits.
std::string emit_ratio_histogram_svg(std::span<const double> ratios, double lo_limit,
                                     double hi_limit, const std::string& title = "");

} // namespace procap
