#include <cstdio>

#include <nlohmann/json.hpp>

#include "procap/dataset_io.hpp"

namespace procap {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json sigma_json(const SigmaEstimate& s) {
    ordered_json j;
    j["method"] = to_string(s.method);
    if (s.window) j["window"] = *s.window;
    j["value"] = s.value;
    return j;
}

ordered_json report_json(const CapabilityReport& r) {
    ordered_json j;
    j["dimension_id"] = r.dimension_id;
    j["n"] = r.n;
    j["mean"] = r.mean;
    j["sigma_overall"] = sigma_json(r.sigma_overall);
    j["sigma_within"] = sigma_json(r.sigma_within);

    if (r.outliers) {
        ordered_json o;
        o["method"] = to_string(r.outliers->method);
        if (r.outliers->method == OutlierMethod::TukeyFence)
            o["params"] = {{"k", r.outliers->params.tukey_k}};
        else
            o["params"] = {{"alpha", r.outliers->params.grubbs_alpha}};
        o["flagged"] = ordered_json::array();
        for (const auto& f : r.outliers->flagged)
            o["flagged"].push_back({{"index", f.index}, {"value", f.value}});
        j["outliers"] = std::move(o);
    } else {
        j["outliers"] = nullptr;
    }

    if (r.normality) {
        j["normality"] = {{"a2", r.normality->a2},
                          {"a2_star", r.normality->a2_star},
                          {"p_value", r.normality->p_value},
                          {"alpha", r.normality->alpha},
                          {"passed", r.normality->passed}};
    } else {
        j["normality"] = nullptr;
    }

    if (r.best_fit) {
        j["best_fit"] = {{"family", to_string(r.best_fit->family)},
                         {"params", r.best_fit->params},
                         {"n", r.best_fit->n},
                         {"loglik", r.best_fit->loglik},
                         {"aic", r.best_fit->aic},
                         {"bic", r.best_fit->bic},
                         {"aicc", r.best_fit->aicc}};
    } else {
        j["best_fit"] = nullptr;
    }

    if (r.quantiles) {
        j["quantiles"] = {{"p00135", r.quantiles->p00135},
                          {"p50", r.quantiles->p50},
                          {"p99865", r.quantiles->p99865}};
    } else {
        j["quantiles"] = nullptr;
    }

    j["indices"] = ordered_json::array();
    for (const auto& iv : r.indices) {
        ordered_json e;
        e["name"] = iv.name;
        if (iv.value) e["value"] = *iv.value;
        if (iv.reason) e["reason"] = to_string(*iv.reason);
        j["indices"].push_back(std::move(e));
    }

    j["trace"] = ordered_json::array();
    for (const auto& t : r.trace)
        j["trace"].push_back({{"node", t.node}, {"predicate", t.predicate}, {"branch", t.branch}});

    j["error"] = r.error ? ordered_json(*r.error) : ordered_json(nullptr);
    return j;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string csv_row(const CapabilityReport& r) {
    std::string row = csv_quote(r.dimension_id);
    auto cell = [&](const std::string& s) { row += "," + s; };

    cell(std::to_string(r.n));
    cell(ordered_json(r.mean).dump());
    cell(to_string(r.sigma_within.method));
    cell(r.sigma_within.window ? std::to_string(*r.sigma_within.window) : "");
    cell(ordered_json(r.sigma_within.value).dump());
    cell(ordered_json(r.sigma_overall.value).dump());
    cell(r.outliers ? to_string(r.outliers->method) : "");
    cell(r.outliers ? std::to_string(r.outliers->flagged.size()) : "");
    cell(r.normality ? ordered_json(r.normality->a2_star).dump() : "");
    cell(r.normality ? ordered_json(r.normality->p_value).dump() : "");
    cell(r.normality ? (r.normality->passed ? "true" : "false") : "");
    cell(r.best_fit ? to_string(r.best_fit->family) : "");
    cell(r.error ? csv_quote(*r.error) : "");

    for (const auto& name : canonical_index_names()) {
        const IndexValue* iv = r.find_index(name);
        cell(iv && iv->value ? fixed3(*iv->value) : "");
        cell(iv && iv->reason ? to_string(*iv->reason) : "");
    }
    return row + "\n";
}

std::string sanitize_column(const std::string& name) {
    // '*' is awkward in downstream tools; the starred columns use `_star`.
    std::string out;
    for (char c : name) out += c == '*' ? std::string("_star") : std::string(1, c);
    return out;
}

} // namespace

std::string report_csv_header() {
    std::string header =
        "dimension_id,n,mean,sigma_within_method,sigma_within_window,sigma_within_value,"
        "sigma_overall_value,outliers_method,outliers_flagged,normality_a2_star,"
        "normality_p_value,normality_passed,best_fit_family,error";
    for (const auto& name : canonical_index_names())
        header += "," + sanitize_column(name) + "," + sanitize_column(name) + "_reason";
    return header + "\n";
}

std::string emit_report(const CapabilityReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report_json(report).dump(2) + "\n";
    return csv_row(report);
}

std::string emit_reports_json(std::span<const CapabilityReport> reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2) + "\n";
}

} // namespace procap
