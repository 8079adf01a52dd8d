#include "co2occ/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "co2occ/errors.hpp"
#include "co2occ/rng.hpp"

namespace co2occ {

void SimConfig::validate() const {
    if (!(volume_m3 > 0.0 && gen_rate > 0.0 && vent_rate_m3_min > 0.0 && outdoor_ppm > 0.0 &&
          initial_ppm > 0.0))
        throw ConfigError("simulator: volume, rates and ppm values must be positive");
    if (noise_std_ppm < 0.0 || spike_prob < 0.0 || spike_prob > 1.0 || move_prob < 0.0 ||
        move_prob > 1.0)
        throw ConfigError("simulator: bad noise/probability parameters");
    if (spike_min_ppm < 0.0 || spike_max_ppm < spike_min_ppm || spike_max_len < 1)
        throw ConfigError("simulator: bad spike parameters");
    if (max_occupancy < 1 || minutes_per_day < 2)
        throw ConfigError("simulator: bad schedule parameters");
    if (vent_on_minute < 0 || vent_off_minute <= vent_on_minute ||
        vent_off_minute > minutes_per_day)
        throw ConfigError("simulator: bad venting switch minutes");
}

double step_zone(double c, int occupants, int venting, const SimConfig& cfg) {
    const double dt = 1.0; // one sample = one minute
    const double source = cfg.gen_rate * occupants / cfg.volume_m3;
    const double sink = venting ? cfg.vent_rate_m3_min * (cfg.outdoor_ppm - c) / cfg.volume_m3
                                : 0.0;
    return c + dt * (source + sink);
}

SimDay generate_day(const SimConfig& cfg, const std::string& day_id) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int m = cfg.minutes_per_day;

    // Occupancy: random arrival/departure steps shaped by the time of day.
    std::vector<int> occ(m, 0);
    int current = 0;
    for (int t = 0; t < m; ++t) {
        if (t >= cfg.departure_end_min) {
            current = 0;
        } else if (rng.uniform01() < cfg.move_prob) {
            const int step = 1 + static_cast<int>(rng.uniform01() * 3.0);
            if (t >= cfg.arrival_start_min && t < cfg.arrival_end_min) {
                current += step;
            } else if (t >= cfg.departure_start_min) {
                current -= step;
            } else if (t >= cfg.arrival_end_min) {
                // midday churn
                current += (rng.uniform01() < 0.5) ? 1 : -1;
            }
            current = std::clamp(current, 0, cfg.max_occupancy);
        }
        occ[t] = current;
    }

    std::vector<int> vent(m, 0);
    for (int t = cfg.vent_on_minute; t < cfg.vent_off_minute; ++t) vent[t] = 1;

    std::vector<double> true_co2(m, 0.0);
    double c = cfg.initial_ppm;
    for (int t = 0; t < m; ++t) {
        true_co2[t] = c;
        c = step_zone(c, occ[t], vent[t], cfg);
    }

    std::vector<double> measured(m, 0.0);
    int spike_left = 0;
    double spike_mag = 0.0;
    for (int t = 0; t < m; ++t) {
        if (spike_left == 0 && cfg.spike_prob > 0.0 && rng.uniform01() < cfg.spike_prob) {
            spike_left = 1 + static_cast<int>(rng.uniform01() * cfg.spike_max_len);
            spike_mag = rng.uniform(cfg.spike_min_ppm, cfg.spike_max_ppm);
        }
        double v = true_co2[t];
        if (cfg.noise_std_ppm > 0.0) v += cfg.noise_std_ppm * rng.normal();
        if (spike_left > 0) {
            v += spike_mag;
            --spike_left;
        }
        measured[t] = std::max(v, 0.0);
    }

    SimDay out;
    out.day.day_id = day_id;
    out.day.sample_interval_s = 60;
    out.day.co2 = std::move(measured);
    out.day.occupancy = std::move(occ);
    out.day.venting = std::move(vent);
    out.true_co2 = std::move(true_co2);
    out.day.validate();
    return out;
}

namespace {

template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

SimConfig sim_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    SimConfig cfg;
    get_if(j, "volume_m3", cfg.volume_m3);
    get_if(j, "gen_rate", cfg.gen_rate);
    get_if(j, "vent_rate_m3_min", cfg.vent_rate_m3_min);
    get_if(j, "outdoor_ppm", cfg.outdoor_ppm);
    get_if(j, "initial_ppm", cfg.initial_ppm);
    get_if(j, "noise_std_ppm", cfg.noise_std_ppm);
    get_if(j, "spike_prob", cfg.spike_prob);
    get_if(j, "spike_min_ppm", cfg.spike_min_ppm);
    get_if(j, "spike_max_ppm", cfg.spike_max_ppm);
    get_if(j, "spike_max_len", cfg.spike_max_len);
    get_if(j, "max_occupancy", cfg.max_occupancy);
    get_if(j, "arrival_start_min", cfg.arrival_start_min);
    get_if(j, "arrival_end_min", cfg.arrival_end_min);
    get_if(j, "departure_start_min", cfg.departure_start_min);
    get_if(j, "departure_end_min", cfg.departure_end_min);
    get_if(j, "move_prob", cfg.move_prob);
    get_if(j, "vent_on_minute", cfg.vent_on_minute);
    get_if(j, "vent_off_minute", cfg.vent_off_minute);
    get_if(j, "minutes_per_day", cfg.minutes_per_day);
    get_if(j, "seed", cfg.seed);
    cfg.validate();
    return cfg;
}

std::string sim_config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j;
    j["volume_m3"] = cfg.volume_m3;
    j["gen_rate"] = cfg.gen_rate;
    j["vent_rate_m3_min"] = cfg.vent_rate_m3_min;
    j["outdoor_ppm"] = cfg.outdoor_ppm;
    j["initial_ppm"] = cfg.initial_ppm;
    j["noise_std_ppm"] = cfg.noise_std_ppm;
    j["spike_prob"] = cfg.spike_prob;
    j["spike_min_ppm"] = cfg.spike_min_ppm;
    j["spike_max_ppm"] = cfg.spike_max_ppm;
    j["spike_max_len"] = cfg.spike_max_len;
    j["max_occupancy"] = cfg.max_occupancy;
    j["arrival_start_min"] = cfg.arrival_start_min;
    j["arrival_end_min"] = cfg.arrival_end_min;
    j["departure_start_min"] = cfg.departure_start_min;
    j["departure_end_min"] = cfg.departure_end_min;
    j["move_prob"] = cfg.move_prob;
    j["vent_on_minute"] = cfg.vent_on_minute;
    j["vent_off_minute"] = cfg.vent_off_minute;
    j["minutes_per_day"] = cfg.minutes_per_day;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

} // namespace co2occ
