#ifndef CO2OCC_SIMULATOR_HPP
#define CO2OCC_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "co2occ/timeseries.hpp"

namespace co2occ {

/// Single-zone well-mixed mass-balance model plus a spike/noise process and
/// a seeded occupancy schedule.
struct SimConfig {
    double volume_m3 = 558.0;          // 9.3m x 20m floor, 3m assumed height
    double gen_rate = 306.9;           // ppm*m^3/min per person (~0.55 ppm/min sealed)
    double vent_rate_m3_min = 18.6;    // fresh-air flow when venting is on
    double outdoor_ppm = 400.0;
    double initial_ppm = 420.0;

    // Measurement model: Gaussian noise plus one-sided spikes lasting a few
    // samples, standing in for non-uniform mixing.
    double noise_std_ppm = 4.0;
    double spike_prob = 0.02;          // per sample
    double spike_min_ppm = 50.0;
    double spike_max_ppm = 300.0;
    int spike_max_len = 3;

    // Occupancy schedule (arrival/departure step process).
    int max_occupancy = 30;
    int arrival_start_min = 480;       // 8:00
    int arrival_end_min = 720;         // 12:00
    int departure_start_min = 960;     // 16:00
    int departure_end_min = 1380;      // 23:00, zero afterwards
    double move_prob = 0.25;           // chance of a step event per minute

    int vent_on_minute = 450;          // 7:30
    int vent_off_minute = 1320;        // 22:00

    int minutes_per_day = 1440;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimDay {
    DayRecord day;                 // measured CO2 (with noise and spikes)
    std::vector<double> true_co2;  // noise-free path
};

/// One Euler step of the mass balance, dt = 1 minute:
/// c' = c + gen_rate*o/V + v*vent_rate*(outdoor - c)/V.
double step_zone(double c, int occupants, int venting, const SimConfig& cfg);

/// Deterministic function of the config (including seed).
SimDay generate_day(const SimConfig& cfg, const std::string& day_id);

SimConfig sim_config_from_json_file(const std::string& path);
std::string sim_config_to_json(const SimConfig& cfg);

} // namespace co2occ

#endif
