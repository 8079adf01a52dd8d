#ifndef CO2OCC_PIPELINE_HPP
#define CO2OCC_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "co2occ/estimator.hpp"
#include "co2occ/fselm.hpp"
#include "co2occ/metrics.hpp"
#include "co2occ/simulator.hpp"
#include "co2occ/timeseries.hpp"

namespace co2occ {

/// The four estimator variants compared by the pipeline.
enum class Variant { standard_elm, fs_raw, fs_global, fs_local };

const char* variant_name(Variant v);

struct PipelineConfig {
    HorizonConfig horizon;          // l=30, s=10
    int hidden = 1000;
    double gamma = 0.001;
    double lambda = 50.0;
    ZmaxTargets targets;            // (1,1,1,1,0.1)
    int candidates = 8;
    std::uint64_t master_seed = 1;
    int days = 30;
    int train_days = 25;
    SimConfig sim;
    std::string out_dir = "out";
    std::string data_dir;           // when set, days are loaded instead of simulated
    int threads = 0;
    FeedbackMode feedback = FeedbackMode::clamped;

    void validate() const;
};

struct PipelineResult {
    /// Aggregated test metrics per variant.
    std::map<Variant, MetricsReport> metrics;
    std::map<Variant, double> training_rmse;
};

/// simulate/load -> train the four variants -> estimate the held-out days ->
/// evaluate -> plot. Artifacts land under config.out_dir; a stage failure
/// leaves that stage's files with a ".partial" suffix.
PipelineResult run_pipeline(const PipelineConfig& config);

PipelineConfig pipeline_config_from_json(const std::string& text);
std::string pipeline_config_to_json(const PipelineConfig& config);

/// Applies one "key=value" override (dotted keys reach the sim config,
/// e.g. sim.noise_std_ppm=10).
void apply_config_override(PipelineConfig& config, const std::string& key_value);

} // namespace co2occ

#endif
