#ifndef CO2OCC_ESTIMATOR_HPP
#define CO2OCC_ESTIMATOR_HPP

#include <vector>

#include "co2occ/fselm.hpp"
#include "co2occ/timeseries.hpp"

namespace co2occ {

enum class SmoothingMode { none, global, local };
enum class FeedbackMode { clamped, rounded };

struct EstimationConfig {
    SmoothingMode smoothing = SmoothingMode::none;
    double lambda = 50.0;
    /// Samples re-estimated per pass in local mode; <= 0 means the full
    /// prefix (the normative setting). A finite window is a performance
    /// escape hatch only.
    int reestimation_window = 0;
    FeedbackMode feedback = FeedbackMode::clamped;

    void validate(const HorizonConfig& horizon) const;
};

/// Per-sample estimates for one day. Entries with has_estimate[k] == false
/// (the warm-up region) carry no meaningful value and are excluded from
/// metrics.
struct EstimateTrace {
    std::vector<double> raw;
    std::vector<double> clamped;  // in [0, clamp_max]
    std::vector<int> rounded;     // round-half-up of clamped
    std::vector<bool> has_estimate;

    /// Truth/estimate pairs restricted to estimated samples.
    void estimated_series(const DayRecord& day, std::vector<int>& truth,
                          std::vector<int>& rounded_out,
                          std::vector<double>& clamped_out) const;
};

std::pair<double, int> clamp_and_round(double raw, double clamp_max);

/// Feedback recursion (smoothing none or global): zero initial state,
/// estimates from k = l onward, prior estimates fed back after clamping.
EstimateTrace estimate_day_feedback(const FsElmModel& model, const DayRecord& day,
                                    const EstimationConfig& config);

/// Local-smoothing estimator: at each sample k the causal prefix is
/// re-smoothed and the whole recursion re-run from the zero initial state,
/// so no estimate from an earlier pass is ever reused. Estimates reported
/// from k = l+1 onward.
EstimateTrace estimate_day_local(const FsElmModel& model, const DayRecord& day,
                                 const EstimationConfig& config);

/// Columns: minute_index,estimate_raw,estimate_clamped,estimate_rounded
/// [,truth_occupancy]; warm-up rows carry "NA" in the estimate columns.
void write_estimates_csv(const std::string& path, const EstimateTrace& trace,
                         const DayRecord* truth_day);

struct EstimatesCsv {
    std::vector<int> minute;
    EstimateTrace trace;
    bool has_truth = false;
    std::vector<int> truth;
};
EstimatesCsv load_estimates_csv(const std::string& path);

} // namespace co2occ

#endif
