#ifndef CO2OCC_TIMESERIES_HPP
#define CO2OCC_TIMESERIES_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace co2occ {

/// Horizon length l and integration stride s, in samples. Requires 1 <= s < l.
struct HorizonConfig {
    int l = 30;
    int s = 10;

    void validate() const;
    /// Flattened input dimension n = 3l + 2.
    int input_dim() const { return 3 * l + 2; }
    /// Feature dimension n_f = 5l - s + 3.
    int feature_dim() const { return 5 * l - s + 3; }
};

/// One day of aligned CO2 / occupancy / venting samples at a fixed interval.
/// Immutable after construction; validate() enforces the invariants.
struct DayRecord {
    std::string day_id = "day";
    int sample_interval_s = 60;
    std::vector<double> co2;    // ppm, finite, >= 0
    std::vector<int> occupancy; // person counts, >= 0
    std::vector<int> venting;   // {0, 1}

    std::size_t size() const { return co2.size(); }
    void validate() const;
};

/// Estimator input at sample k: CO2 window c_{k-l:k}, past occupancy
/// o_{k-l:k-1} (true counts in training, fed-back estimates in deployment,
/// hence double), venting window v_{k-l:k}.
struct InputWindow {
    std::vector<double> co2_window;  // length l+1
    std::vector<double> occ_window;  // length l
    std::vector<double> vent_window; // length l+1

    /// Concatenated [co2, occ, vent], length 3l+2.
    Eigen::VectorXd flatten() const;
};

InputWindow window_at(const std::vector<double>& co2,
                      const std::vector<double>& occ_source,
                      const std::vector<int>& venting,
                      int k, const HorizonConfig& config);

InputWindow window_at(const DayRecord& day,
                      const std::vector<double>& occ_source,
                      int k, const HorizonConfig& config);

/// CSV schema: optional leading "# sample_interval_s=<int> day_id=<string>"
/// metadata comment, then header "minute_index,co2_ppm,occupancy,venting"
/// (extra trailing columns are preserved on load and re-emitted on write).
DayRecord load_day_csv(const std::string& path);

/// Loads the day along with any extra columns (e.g. true_co2_ppm).
struct DayCsv {
    DayRecord day;
    std::vector<std::string> extra_names;
    std::vector<std::vector<double>> extra_cols;
};
DayCsv load_day_csv_full(const std::string& path);

void write_day_csv(const std::string& path, const DayRecord& day,
                   const std::vector<std::string>& extra_names = {},
                   const std::vector<std::vector<double>>& extra_cols = {});

/// Canonical fixed-precision number formatting shared by all CSV emitters.
std::string format_double(double v);

} // namespace co2occ

#endif
