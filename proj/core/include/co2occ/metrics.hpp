#ifndef CO2OCC_METRICS_HPP
#define CO2OCC_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace co2occ {

/// RMSE, occupancy-detection rates and the x-tolerance accuracy curve.
/// fpr/fnr are empty when the corresponding index set (empty / occupied
/// samples) is itself empty.
struct MetricsReport {
    double rmse = 0.0;
    std::optional<double> fpr;
    std::optional<double> fnr;
    double fdr = 0.0;
    std::map<int, double> tolerance_curve;
    int m = 0;
    int n0 = 0;
    int n1 = 0;
    /// RMSE input: "clamped" reals when available, else "rounded" integers.
    std::string rmse_source = "rounded";
};

/// Detection rates and tolerance accuracies are computed on the rounded
/// integer estimates; RMSE on the clamped reals when `clamped` is non-empty.
MetricsReport compute_metrics(const std::vector<int>& truth, const std::vector<int>& rounded,
                              const std::vector<double>& clamped,
                              const std::vector<int>& tolerances);

/// Default tolerance grid 0..10.
std::vector<int> default_tolerances();

enum class ReportFormat { text, json, csv };

std::string emit_report(const MetricsReport& report, ReportFormat format);

MetricsReport parse_report_json(const std::string& text);

} // namespace co2occ

#endif
