#include "co2occ/estimator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "co2occ/errors.hpp"
#include "co2occ/smoothing.hpp"

namespace co2occ {

void EstimationConfig::validate(const HorizonConfig& horizon) const {
    if (!(lambda >= 0.0)) throw ConfigError("estimation lambda must be >= 0");
    if (reestimation_window > 0 && reestimation_window < horizon.l + 1)
        throw ConfigError("reestimation window must be >= l+1 when finite");
}

std::pair<double, int> clamp_and_round(double raw, double clamp_max) {
    const double clamped = std::min(std::max(raw, 0.0), clamp_max);
    return {clamped, static_cast<int>(std::floor(clamped + 0.5))};
}

namespace {

/// The feedback recursion of the estimator: zero state before first_k, then
/// sequential prediction feeding back the clamped (or rounded) estimates.
/// Writes raw/clamped into trace for i in [first_k, last_k].
void run_recursion(const FsElmModel& model, const std::vector<double>& co2,
                   const std::vector<int>& venting, int first_k, int last_k,
                   FeedbackMode feedback, std::vector<double>& raw,
                   std::vector<double>& clamped, std::vector<double>& fed) {
    const HorizonConfig& cfg = model.config;
    std::fill(fed.begin(), fed.end(), 0.0);
    for (int i = first_k; i <= last_k; ++i) {
        const InputWindow w = window_at(co2, fed, venting, i, cfg);
        const double r = predict(model, w);
        const auto [cl, rd] = clamp_and_round(r, model.clamp_max);
        raw[i] = r;
        clamped[i] = cl;
        fed[i] = feedback == FeedbackMode::clamped ? cl : static_cast<double>(rd);
    }
}

EstimateTrace make_trace(std::size_t m) {
    EstimateTrace t;
    t.raw.assign(m, 0.0);
    t.clamped.assign(m, 0.0);
    t.rounded.assign(m, 0);
    t.has_estimate.assign(m, false);
    return t;
}

} // namespace

EstimateTrace estimate_day_feedback(const FsElmModel& model, const DayRecord& day,
                                    const EstimationConfig& config) {
    config.validate(model.config);
    if (config.smoothing == SmoothingMode::local)
        throw ConfigError("estimate_day_feedback: use estimate_day_local for local smoothing");
    const int m = static_cast<int>(day.size());
    const int l = model.config.l;
    if (m <= l) throw DataError("day too short for horizon l=" + std::to_string(l));

    std::vector<double> co2 = day.co2;
    if (config.smoothing == SmoothingMode::global)
        co2 = smooth_global(co2, SmoothConfig{config.lambda});

    EstimateTrace trace = make_trace(m);
    std::vector<double> fed(m, 0.0);
    run_recursion(model, co2, day.venting, l, m - 1, config.feedback, trace.raw, trace.clamped,
                  fed);
    for (int k = l; k < m; ++k) {
        trace.has_estimate[k] = true;
        trace.rounded[k] = clamp_and_round(trace.raw[k], model.clamp_max).second;
    }
    return trace;
}

EstimateTrace estimate_day_local(const FsElmModel& model, const DayRecord& day,
                                 const EstimationConfig& config) {
    config.validate(model.config);
    const int m = static_cast<int>(day.size());
    const int l = model.config.l;
    if (m <= l + 1) throw DataError("day too short for horizon l=" + std::to_string(l));

    const SmoothConfig smooth{config.lambda};
    EstimateTrace trace = make_trace(m);
    std::vector<double> pass_raw(m, 0.0);
    std::vector<double> pass_clamped(m, 0.0);
    std::vector<double> fed(m, 0.0);

    for (int k = l + 1; k < m; ++k) {
        // Each pass sees only the causal prefix and its own estimates;
        // nothing from earlier passes is reused.
        const std::vector<double> prefix(day.co2.begin(), day.co2.begin() + k + 1);
        const std::vector<double> cls = smooth_local(prefix, smooth);
        const int first = config.reestimation_window > 0
                              ? std::max(l, k - config.reestimation_window + 1)
                              : l;
        run_recursion(model, cls, day.venting, first, k, config.feedback, pass_raw, pass_clamped,
                      fed);
        trace.raw[k] = pass_raw[k];
        trace.clamped[k] = pass_clamped[k];
        trace.rounded[k] = clamp_and_round(pass_raw[k], model.clamp_max).second;
        trace.has_estimate[k] = true;
    }
    return trace;
}

void EstimateTrace::estimated_series(const DayRecord& day, std::vector<int>& truth,
                                     std::vector<int>& rounded_out,
                                     std::vector<double>& clamped_out) const {
    if (day.size() != raw.size()) throw ConfigError("estimated_series: day/trace length mismatch");
    truth.clear();
    rounded_out.clear();
    clamped_out.clear();
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (!has_estimate[k]) continue;
        truth.push_back(day.occupancy[k]);
        rounded_out.push_back(rounded[k]);
        clamped_out.push_back(clamped[k]);
    }
}

void write_estimates_csv(const std::string& path, const EstimateTrace& trace,
                         const DayRecord* truth_day) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "minute_index,estimate_raw,estimate_clamped,estimate_rounded";
    if (truth_day) out << ",truth_occupancy";
    out << "\n";
    for (std::size_t k = 0; k < trace.raw.size(); ++k) {
        out << k << ',';
        if (trace.has_estimate[k])
            out << format_double(trace.raw[k]) << ',' << format_double(trace.clamped[k]) << ','
                << trace.rounded[k];
        else
            out << "NA,NA,NA";
        if (truth_day) out << ',' << truth_day->occupancy[k];
        out << "\n";
    }
}

EstimatesCsv load_estimates_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    EstimatesCsv out;
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "minute_index,estimate_raw,estimate_clamped,estimate_rounded,truth_occupancy")
        out.has_truth = true;
    else if (line != "minute_index,estimate_raw,estimate_clamped,estimate_rounded")
        throw DataError(path + ": bad estimates header");

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        const std::size_t expect = out.has_truth ? 5u : 4u;
        if (cells.size() != expect)
            throw DataError(path + ": row " + std::to_string(row) + ": bad column count");
        out.minute.push_back(std::stoi(cells[0]));
        if (cells[1] == "NA") {
            out.trace.raw.push_back(0.0);
            out.trace.clamped.push_back(0.0);
            out.trace.rounded.push_back(0);
            out.trace.has_estimate.push_back(false);
        } else {
            out.trace.raw.push_back(std::stod(cells[1]));
            out.trace.clamped.push_back(std::stod(cells[2]));
            out.trace.rounded.push_back(std::stoi(cells[3]));
            out.trace.has_estimate.push_back(true);
        }
        if (out.has_truth) out.truth.push_back(std::stoi(cells[4]));
    }
    return out;
}

} // namespace co2occ
