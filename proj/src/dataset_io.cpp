#include "procap/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace procap {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_cell(std::string_view cell, size_t row, size_t col) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        raise(Errc::NonNumericCell, "non-numeric cell at row " + std::to_string(row) +
                                        ", column " + std::to_string(col) + ": '" +
                                        std::string(cell) + "'");
    return value;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

const Dimension* Dataset::find(const std::string& id) const {
    for (const auto& dim : dimensions)
        if (dim.id == id) return &dim;
    return nullptr;
}

Dataset parse_dataset(std::string_view csv) {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t nl = csv.find('\n', pos);
        const auto line = nl == std::string_view::npos ? csv.substr(pos)
                                                       : csv.substr(pos, nl - pos);
        if (!trim(line).empty()) lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (lines.empty()) raise(Errc::EmptyInput, "empty dataset file");

    const auto header = split_cells(lines[0]);
    if (header.size() < 2) raise(Errc::EmptyInput, "header names no dimensions");
    const size_t ncols = header.size() - 1;

    std::vector<std::string> ids;
    ids.reserve(ncols);
    for (size_t c = 1; c < header.size(); ++c) {
        const std::string id(header[c]);
        if (std::find(ids.begin(), ids.end(), id) != ids.end())
            raise(Errc::DuplicateDimensionId, "duplicate dimension id '" + id + "'");
        ids.push_back(id);
    }

    // Labeled tolerance rows, then numbered sample rows in temporal order.
    std::map<std::string, std::vector<double>> tolerance_rows;
    std::vector<std::vector<double>> columns(ncols);
    for (size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split_cells(lines[r]);
        if (cells.size() > header.size())
            raise(Errc::NonNumericCell,
                  "row " + std::to_string(r + 1) + " has more cells than the header");
        const std::string label(cells[0]);
        const bool is_tolerance = label == "T" || label == "Tol+" || label == "Tol-";
        std::vector<double> row_values;
        for (size_t c = 1; c < header.size(); ++c) {
            const auto cell = c < cells.size() ? cells[c] : std::string_view{};
            if (cell.empty()) {
                if (is_tolerance)
                    raise(Errc::MissingToleranceRow,
                          "tolerance row '" + label + "' has an empty cell");
                continue;
            }
            const double v = parse_cell(cell, r + 1, c + 1);
            if (is_tolerance)
                row_values.push_back(v);
            else
                columns[c - 1].push_back(v);
        }
        if (is_tolerance) tolerance_rows[label] = std::move(row_values);
    }

    for (const char* label : {"T", "Tol+", "Tol-"})
        if (!tolerance_rows.contains(label))
            raise(Errc::MissingToleranceRow, std::string("missing tolerance row '") + label + "'");

    Dataset dataset;
    for (size_t c = 0; c < ncols; ++c) {
        const double target = tolerance_rows["T"][c];
        const double tol_plus = tolerance_rows["Tol+"][c];
        const double tol_minus = tolerance_rows["Tol-"][c];
        std::optional<double> lsl, usl;
        if (tol_plus != 0.0) usl = target + tol_plus;
        if (tol_minus != 0.0) lsl = target - tol_minus;
        dataset.dimensions.push_back({ids[c], ToleranceSpec(lsl, usl, target),
                                      MeasurementSeries(std::move(columns[c]))});
    }
    return dataset;
}

std::string emit_dataset_csv(const Dataset& dataset) {
    std::ostringstream out;
    out << "NO.";
    size_t max_len = 0;
    for (const auto& dim : dataset.dimensions) {
        if (!dim.spec.has_target())
            raise(Errc::InvalidArgument,
                  "canonical CSV needs a target for dimension '" + dim.id + "'");
        out << "," << dim.id;
        max_len = std::max(max_len, dim.series.values().size());
    }
    out << "\n";

    auto tolerance_row = [&](const char* label, auto leg) {
        out << label;
        for (const auto& dim : dataset.dimensions) out << "," << shortest(leg(dim));
        out << "\n";
    };
    tolerance_row("T", [](const Dimension& d) { return *d.spec.target(); });
    tolerance_row("Tol+", [](const Dimension& d) {
        return d.spec.usl() ? *d.spec.usl() - *d.spec.target() : 0.0;
    });
    tolerance_row("Tol-", [](const Dimension& d) {
        return d.spec.lsl() ? *d.spec.target() - *d.spec.lsl() : 0.0;
    });

    for (size_t i = 0; i < max_len; ++i) {
        out << (i + 1);
        for (const auto& dim : dataset.dimensions) {
            out << ",";
            const auto v = dim.series.values();
            if (i < v.size()) out << shortest(v[i]);
        }
        out << "\n";
    }
    return out.str();
}

} // namespace procap
