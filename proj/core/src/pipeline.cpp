#include "co2occ/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "co2occ/errors.hpp"
#include "co2occ/model_io.hpp"
#include "co2occ/rng.hpp"
#include "co2occ/smoothing.hpp"
#include "co2occ/svg.hpp"

namespace fs = std::filesystem;

namespace co2occ {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::standard_elm: return "standard_elm";
        case Variant::fs_raw: return "fs_raw";
        case Variant::fs_global: return "fs_global";
        case Variant::fs_local: return "fs_local";
    }
    return "?";
}

void PipelineConfig::validate() const {
    horizon.validate();
    targets.validate();
    if (hidden < 1 || candidates < 1) throw ConfigError("pipeline: bad hidden/candidate counts");
    if (!(gamma > 0.0) || !(lambda >= 0.0)) throw ConfigError("pipeline: bad gamma/lambda");
    if (days < 2 || train_days < 1 || train_days >= days)
        throw ConfigError("pipeline: need 1 <= train_days < days");
    if (out_dir.empty()) throw ConfigError("pipeline: empty output directory");
    sim.validate();
}

namespace {

/// Writes text to path + ".partial" and renames into place, so an aborted
/// stage leaves only .partial files behind.
void write_artifact(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".partial";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << text;
    }
    fs::rename(tmp, path);
}

TrainingSet build_training_set(const std::vector<DayRecord>& days, const HorizonConfig& horizon,
                               bool smooth, double lambda) {
    TrainingSet set;
    for (const auto& day : days) {
        std::vector<double> co2 = day.co2;
        if (smooth) co2 = smooth_global(co2, SmoothConfig{lambda});
        std::vector<double> occ(day.occupancy.begin(), day.occupancy.end());
        const int m = static_cast<int>(day.size());
        for (int k = horizon.l; k < m; ++k) {
            set.inputs.push_back(window_at(co2, occ, day.venting, k, horizon));
            set.targets.push_back(static_cast<double>(day.occupancy[k]));
        }
    }
    return set;
}

[[noreturn]] void fail_stage(const char* stage, const std::exception& e) {
    throw std::runtime_error(std::string("pipeline stage '") + stage + "' failed: " + e.what());
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    const fs::path out_dir(config.out_dir);
    for (const char* sub : {"data", "models", "estimates", "metrics", "plots"})
        fs::create_directories(out_dir / sub);

    // --- stage: data -------------------------------------------------------
    std::vector<DayRecord> days;
    std::vector<std::vector<double>> true_co2;
    try {
        if (!config.data_dir.empty()) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(config.data_dir))
                if (entry.path().extension() == ".csv") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (static_cast<int>(files.size()) < config.days)
                throw DataError("data_dir holds " + std::to_string(files.size()) +
                                " csv files, need " + std::to_string(config.days));
            files.resize(config.days);
            for (const auto& f : files) days.push_back(load_day_csv(f.string()));
        } else {
            for (int d = 0; d < config.days; ++d) {
                SimConfig sim = config.sim;
                sim.seed = derive_seed(config.master_seed, 100 + d);
                char name[32];
                std::snprintf(name, sizeof(name), "day%03d", d);
                SimDay sd = generate_day(sim, name);
                const fs::path path = out_dir / "data" / (std::string(name) + ".csv");
                const fs::path tmp = path.string() + ".partial";
                write_day_csv(tmp.string(), sd.day, {"true_co2_ppm"}, {sd.true_co2});
                fs::rename(tmp, path);
                days.push_back(std::move(sd.day));
                true_co2.push_back(std::move(sd.true_co2));
            }
        }
    } catch (const std::exception& e) {
        fail_stage("data", e);
    }

    const std::vector<DayRecord> train_days(days.begin(), days.begin() + config.train_days);
    const std::vector<DayRecord> test_days(days.begin() + config.train_days, days.end());

    // --- stage: train ------------------------------------------------------
    std::map<Variant, FsElmModel> models;
    try {
        TrainOptions opts;
        opts.hidden = config.hidden;
        opts.gamma = config.gamma;
        opts.targets = config.targets;
        opts.candidates = config.candidates;
        opts.threads = config.threads;

        const TrainingSet raw_set =
            build_training_set(train_days, config.horizon, false, config.lambda);
        const TrainingSet smooth_set =
            build_training_set(train_days, config.horizon, true, config.lambda);

        opts.mode = ModelMode::standard_elm;
        opts.master_seed = derive_seed(config.master_seed, 9000);
        models[Variant::standard_elm] = train(raw_set, config.horizon, opts);

        opts.mode = ModelMode::fs_elm;
        opts.master_seed = derive_seed(config.master_seed, 9001);
        models[Variant::fs_raw] = train(raw_set, config.horizon, opts);

        opts.master_seed = derive_seed(config.master_seed, 9002);
        models[Variant::fs_global] = train(smooth_set, config.horizon, opts);

        for (const auto& [v, model] : models) {
            if (v == Variant::fs_local) continue;
            write_artifact(out_dir / "models" / (std::string(variant_name(v)) + ".json"),
                           model_to_json(model));
        }
    } catch (const std::exception& e) {
        fail_stage("train", e);
    }

    // --- stage: estimate ---------------------------------------------------
    // variant -> per-test-day traces
    std::map<Variant, std::vector<EstimateTrace>> traces;
    try {
        EstimationConfig none_cfg;
        none_cfg.smoothing = SmoothingMode::none;
        none_cfg.feedback = config.feedback;
        EstimationConfig global_cfg = none_cfg;
        global_cfg.smoothing = SmoothingMode::global;
        global_cfg.lambda = config.lambda;
        EstimationConfig local_cfg = global_cfg;
        local_cfg.smoothing = SmoothingMode::local;

        for (const auto& day : test_days) {
            traces[Variant::standard_elm].push_back(
                estimate_day_feedback(models.at(Variant::standard_elm), day, none_cfg));
            traces[Variant::fs_raw].push_back(
                estimate_day_feedback(models.at(Variant::fs_raw), day, none_cfg));
            traces[Variant::fs_global].push_back(
                estimate_day_feedback(models.at(Variant::fs_global), day, global_cfg));
        }
        // The local variant re-runs the whole recursion at every sample; give
        // each test day its own thread.
        std::vector<std::future<EstimateTrace>> futures;
        for (const auto& day : test_days)
            futures.push_back(std::async(std::launch::async, [&, day] {
                return estimate_day_local(models.at(Variant::fs_global), day, local_cfg);
            }));
        for (auto& f : futures) traces[Variant::fs_local].push_back(f.get());

        for (const auto& [v, day_traces] : traces) {
            for (std::size_t d = 0; d < day_traces.size(); ++d) {
                const fs::path path = out_dir / "estimates" /
                                      (std::string(variant_name(v)) + "_" +
                                       test_days[d].day_id + ".csv");
                const fs::path tmp = path.string() + ".partial";
                write_estimates_csv(tmp.string(), day_traces[d], &test_days[d]);
                fs::rename(tmp, path);
            }
        }
    } catch (const std::exception& e) {
        fail_stage("estimate", e);
    }

    // --- stage: evaluate ---------------------------------------------------
    PipelineResult result;
    try {
        const std::vector<int> tolerances = default_tolerances();
        nlohmann::ordered_json summary;
        summary["seed"] = config.master_seed;
        summary["days"] = config.days;
        summary["train_days"] = config.train_days;
        for (const auto& [v, day_traces] : traces) {
            std::vector<int> truth, rounded;
            std::vector<double> clamped;
            for (std::size_t d = 0; d < day_traces.size(); ++d) {
                std::vector<int> t, r;
                std::vector<double> c;
                day_traces[d].estimated_series(test_days[d], t, r, c);
                truth.insert(truth.end(), t.begin(), t.end());
                rounded.insert(rounded.end(), r.begin(), r.end());
                clamped.insert(clamped.end(), c.begin(), c.end());
            }
            const MetricsReport rep = compute_metrics(truth, rounded, clamped, tolerances);
            result.metrics[v] = rep;
            write_artifact(out_dir / "metrics" / (std::string(variant_name(v)) + ".json"),
                           emit_report(rep, ReportFormat::json));
            summary[variant_name(v)] =
                nlohmann::ordered_json::parse(emit_report(rep, ReportFormat::json));
        }
        for (const auto& [v, model] : models) result.training_rmse[v] = model.training_rmse;
        write_artifact(out_dir / "metrics" / "summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        fail_stage("evaluate", e);
    }

    // --- stage: plot -------------------------------------------------------
    try {
        for (const auto& [v, day_traces] : traces) {
            if (day_traces.empty()) continue;
            const std::string est_csv =
                (out_dir / "estimates" /
                 (std::string(variant_name(v)) + "_" + test_days[0].day_id + ".csv"))
                    .string();
            write_artifact(out_dir / "plots" / (std::string(variant_name(v)) + "_day0.svg"),
                           plot_estimates_svg(est_csv));
        }
        std::vector<std::pair<std::string, std::map<int, double>>> curves;
        for (const auto& [v, rep] : result.metrics)
            curves.emplace_back(variant_name(v), rep.tolerance_curve);
        write_artifact(out_dir / "plots" / "tolerance_curves.svg",
                       plot_tolerance_curves_svg(curves));
    } catch (const std::exception& e) {
        fail_stage("plot", e);
    }

    return result;
}

namespace {

template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

PipelineConfig pipeline_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad pipeline config: ") + e.what());
    }
    PipelineConfig cfg;
    get_if(j, "l", cfg.horizon.l);
    get_if(j, "s", cfg.horizon.s);
    get_if(j, "hidden", cfg.hidden);
    get_if(j, "gamma", cfg.gamma);
    get_if(j, "lambda", cfg.lambda);
    if (j.contains("targets")) {
        const auto& t = j.at("targets");
        cfg.targets = {t.at("p"), t.at("i"), t.at("d"), t.at("o"), t.at("v")};
    }
    get_if(j, "candidates", cfg.candidates);
    get_if(j, "seed", cfg.master_seed);
    get_if(j, "days", cfg.days);
    get_if(j, "train_days", cfg.train_days);
    get_if(j, "out_dir", cfg.out_dir);
    get_if(j, "data_dir", cfg.data_dir);
    get_if(j, "threads", cfg.threads);
    std::string fb = "clamped";
    get_if(j, "feedback", fb);
    if (fb == "clamped")
        cfg.feedback = FeedbackMode::clamped;
    else if (fb == "rounded")
        cfg.feedback = FeedbackMode::rounded;
    else
        throw ConfigError("feedback must be 'clamped' or 'rounded'");
    if (j.contains("sim")) {
        const nlohmann::json& sj = j.at("sim");
        SimConfig& s = cfg.sim;
        get_if(sj, "volume_m3", s.volume_m3);
        get_if(sj, "gen_rate", s.gen_rate);
        get_if(sj, "vent_rate_m3_min", s.vent_rate_m3_min);
        get_if(sj, "outdoor_ppm", s.outdoor_ppm);
        get_if(sj, "initial_ppm", s.initial_ppm);
        get_if(sj, "noise_std_ppm", s.noise_std_ppm);
        get_if(sj, "spike_prob", s.spike_prob);
        get_if(sj, "spike_min_ppm", s.spike_min_ppm);
        get_if(sj, "spike_max_ppm", s.spike_max_ppm);
        get_if(sj, "spike_max_len", s.spike_max_len);
        get_if(sj, "max_occupancy", s.max_occupancy);
        get_if(sj, "arrival_start_min", s.arrival_start_min);
        get_if(sj, "arrival_end_min", s.arrival_end_min);
        get_if(sj, "departure_start_min", s.departure_start_min);
        get_if(sj, "departure_end_min", s.departure_end_min);
        get_if(sj, "move_prob", s.move_prob);
        get_if(sj, "vent_on_minute", s.vent_on_minute);
        get_if(sj, "vent_off_minute", s.vent_off_minute);
        get_if(sj, "minutes_per_day", s.minutes_per_day);
    }
    cfg.validate();
    return cfg;
}

std::string pipeline_config_to_json(const PipelineConfig& config) {
    nlohmann::ordered_json j;
    j["l"] = config.horizon.l;
    j["s"] = config.horizon.s;
    j["hidden"] = config.hidden;
    j["gamma"] = config.gamma;
    j["lambda"] = config.lambda;
    j["targets"] = {{"p", config.targets.p},
                    {"i", config.targets.i},
                    {"d", config.targets.d},
                    {"o", config.targets.o},
                    {"v", config.targets.v}};
    j["candidates"] = config.candidates;
    j["seed"] = config.master_seed;
    j["days"] = config.days;
    j["train_days"] = config.train_days;
    j["out_dir"] = config.out_dir;
    j["data_dir"] = config.data_dir;
    j["threads"] = config.threads;
    j["feedback"] = config.feedback == FeedbackMode::clamped ? "clamped" : "rounded";
    j["sim"] = nlohmann::ordered_json::parse(sim_config_to_json(config.sim));
    return j.dump(2) + "\n";
}

void apply_config_override(PipelineConfig& config, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + key_value);
    const std::string key = key_value.substr(0, eq);
    const std::string value = key_value.substr(eq + 1);
    auto as_int = [&] { return std::stoi(value); };
    auto as_double = [&] { return std::stod(value); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };

    if (key == "l") config.horizon.l = as_int();
    else if (key == "s") config.horizon.s = as_int();
    else if (key == "hidden") config.hidden = as_int();
    else if (key == "gamma") config.gamma = as_double();
    else if (key == "lambda") config.lambda = as_double();
    else if (key == "candidates") config.candidates = as_int();
    else if (key == "seed") config.master_seed = as_u64();
    else if (key == "days") config.days = as_int();
    else if (key == "train_days") config.train_days = as_int();
    else if (key == "out_dir") config.out_dir = value;
    else if (key == "data_dir") config.data_dir = value;
    else if (key == "threads") config.threads = as_int();
    else if (key == "feedback") {
        if (value == "clamped") config.feedback = FeedbackMode::clamped;
        else if (value == "rounded") config.feedback = FeedbackMode::rounded;
        else throw ConfigError("feedback must be 'clamped' or 'rounded'");
    }
    else if (key == "targets.p") config.targets.p = as_double();
    else if (key == "targets.i") config.targets.i = as_double();
    else if (key == "targets.d") config.targets.d = as_double();
    else if (key == "targets.o") config.targets.o = as_double();
    else if (key == "targets.v") config.targets.v = as_double();
    else if (key == "sim.volume_m3") config.sim.volume_m3 = as_double();
    else if (key == "sim.gen_rate") config.sim.gen_rate = as_double();
    else if (key == "sim.vent_rate_m3_min") config.sim.vent_rate_m3_min = as_double();
    else if (key == "sim.outdoor_ppm") config.sim.outdoor_ppm = as_double();
    else if (key == "sim.initial_ppm") config.sim.initial_ppm = as_double();
    else if (key == "sim.noise_std_ppm") config.sim.noise_std_ppm = as_double();
    else if (key == "sim.spike_prob") config.sim.spike_prob = as_double();
    else if (key == "sim.spike_min_ppm") config.sim.spike_min_ppm = as_double();
    else if (key == "sim.spike_max_ppm") config.sim.spike_max_ppm = as_double();
    else if (key == "sim.spike_max_len") config.sim.spike_max_len = as_int();
    else if (key == "sim.max_occupancy") config.sim.max_occupancy = as_int();
    else if (key == "sim.move_prob") config.sim.move_prob = as_double();
    else if (key == "sim.vent_on_minute") config.sim.vent_on_minute = as_int();
    else if (key == "sim.vent_off_minute") config.sim.vent_off_minute = as_int();
    else if (key == "sim.minutes_per_day") config.sim.minutes_per_day = as_int();
    else throw ConfigError("unknown config key '" + key + "'");
}

} // namespace co2occ
