#include "co2occ/metrics.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "co2occ/errors.hpp"

namespace co2occ {

std::vector<int> default_tolerances() {
    std::vector<int> t;
    for (int x = 0; x <= 10; ++x) t.push_back(x);
    return t;
}

MetricsReport compute_metrics(const std::vector<int>& truth, const std::vector<int>& rounded,
                              const std::vector<double>& clamped,
                              const std::vector<int>& tolerances) {
    const std::size_t m = truth.size();
    if (m == 0) throw ConfigError("compute_metrics: empty sequences");
    if (rounded.size() != m)
        throw ConfigError("compute_metrics: truth/estimate length mismatch");
    if (!clamped.empty() && clamped.size() != m)
        throw ConfigError("compute_metrics: clamped length mismatch");

    MetricsReport rep;
    rep.m = static_cast<int>(m);

    double sq = 0.0;
    int occupied_hits = 0; // sum of 1(est>0) over N1
    int empty_hits = 0;    // sum of 1(est>0) over N0
    for (std::size_t k = 0; k < m; ++k) {
        const double est = clamped.empty() ? static_cast<double>(rounded[k]) : clamped[k];
        const double e = static_cast<double>(truth[k]) - est;
        sq += e * e;
        const bool est_occ = rounded[k] > 0;
        if (truth[k] > 0) {
            ++rep.n1;
            if (est_occ) ++occupied_hits;
        } else {
            ++rep.n0;
            if (est_occ) ++empty_hits;
        }
    }
    rep.rmse = std::sqrt(sq / static_cast<double>(m));
    rep.rmse_source = clamped.empty() ? "rounded" : "clamped";
    if (rep.n0 > 0) rep.fpr = static_cast<double>(empty_hits) / rep.n0;
    if (rep.n1 > 0) rep.fnr = 1.0 - static_cast<double>(occupied_hits) / rep.n1;
    rep.fdr = static_cast<double>(empty_hits + rep.n1 - occupied_hits) / static_cast<double>(m);

    for (int x : tolerances) {
        if (x < 0) throw ConfigError("compute_metrics: negative tolerance");
        int within = 0;
        for (std::size_t k = 0; k < m; ++k)
            if (std::abs(truth[k] - rounded[k]) <= x) ++within;
        rep.tolerance_curve[x] = static_cast<double>(within) / static_cast<double>(m);
    }
    return rep;
}

namespace {

std::string rate_to_text(const std::optional<double>& rate) {
    if (!rate) return "n/a";
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << *rate;
    return os.str();
}

} // namespace

std::string emit_report(const MetricsReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::ordered_json j;
        j["rmse"] = report.rmse;
        j["rmse_source"] = report.rmse_source;
        if (report.fpr) j["fpr"] = *report.fpr; else j["fpr"] = nullptr;
        if (report.fnr) j["fnr"] = *report.fnr; else j["fnr"] = nullptr;
        j["fdr"] = report.fdr;
        j["m"] = report.m;
        j["n0"] = report.n0;
        j["n1"] = report.n1;
        nlohmann::ordered_json curve = nlohmann::ordered_json::array();
        for (const auto& [x, tau] : report.tolerance_curve)
            curve.push_back({{"x", x}, {"tau", tau}});
        j["tolerance_curve"] = curve;
        j["indicator_source"] = "rounded";
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    if (format == ReportFormat::text) {
        os << "samples:   " << report.m << " (empty " << report.n0 << ", occupied " << report.n1
           << ")\n";
        os << "rmse:      " << report.rmse << " (" << report.rmse_source << ")\n";
        os << "fpr:       " << rate_to_text(report.fpr) << "\n";
        os << "fnr:       " << rate_to_text(report.fnr) << "\n";
        os << "fdr:       " << report.fdr << "\n";
        os << "tolerance accuracy:\n";
        for (const auto& [x, tau] : report.tolerance_curve)
            os << "  tau(" << x << ") = " << tau << "\n";
        return os.str();
    }
    // csv
    os << "metric,value\n";
    os << "rmse," << report.rmse << "\n";
    os << "fpr," << rate_to_text(report.fpr) << "\n";
    os << "fnr," << rate_to_text(report.fnr) << "\n";
    os << "fdr," << report.fdr << "\n";
    os << "m," << report.m << "\n";
    os << "n0," << report.n0 << "\n";
    os << "n1," << report.n1 << "\n";
    for (const auto& [x, tau] : report.tolerance_curve) os << "tau_" << x << "," << tau << "\n";
    return os.str();
}

MetricsReport parse_report_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad metrics json: ") + e.what());
    }
    MetricsReport rep;
    rep.rmse = j.at("rmse").get<double>();
    rep.rmse_source = j.value("rmse_source", "rounded");
    if (!j.at("fpr").is_null()) rep.fpr = j.at("fpr").get<double>();
    if (!j.at("fnr").is_null()) rep.fnr = j.at("fnr").get<double>();
    rep.fdr = j.at("fdr").get<double>();
    rep.m = j.at("m").get<int>();
    rep.n0 = j.at("n0").get<int>();
    rep.n1 = j.at("n1").get<int>();
    for (const auto& pt : j.at("tolerance_curve"))
        rep.tolerance_curve[pt.at("x").get<int>()] = pt.at("tau").get<double>();
    return rep;
}

} // namespace co2occ
