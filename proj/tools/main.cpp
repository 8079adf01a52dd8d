// co2occ: CO2-based indoor occupancy estimation pipeline.
//
// Subcommands: simulate, smooth, train, estimate, evaluate, plot, pipeline.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "co2occ/errors.hpp"
#include "co2occ/estimator.hpp"
#include "co2occ/fselm.hpp"
#include "co2occ/metrics.hpp"
#include "co2occ/model_io.hpp"
#include "co2occ/pipeline.hpp"
#include "co2occ/rng.hpp"
#include "co2occ/simulator.hpp"
#include "co2occ/smoothing.hpp"
#include "co2occ/svg.hpp"
#include "co2occ/timeseries.hpp"

namespace fs = std::filesystem;
using namespace co2occ;

namespace {

bool env_seed(std::uint64_t& seed) {
    const char* env = std::getenv("CO2OCC_SEED");
    if (!env) return false;
    seed = std::strtoull(env, nullptr, 10);
    return true;
}

std::vector<int> parse_tolerances(const std::string& spec) {
    std::vector<int> out;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        if (lo > hi) throw ConfigError("bad tolerance range " + spec);
        for (int x = lo; x <= hi; ++x) out.push_back(x);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw ConfigError("empty tolerance list");
    return out;
}

ZmaxTargets parse_targets(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 5)
        throw ConfigError("--targets needs five comma-separated values, got '" + spec + "'");
    ZmaxTargets t{vals[0], vals[1], vals[2], vals[3], vals[4]};
    t.validate();
    return t;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

int cmd_simulate(const std::string& config_path, int days, const std::string& out_dir,
                 std::uint64_t seed) {
    SimConfig cfg;
    if (!config_path.empty()) cfg = sim_config_from_json_file(config_path);
    env_seed(seed);
    fs::create_directories(out_dir);
    for (int d = 0; d < days; ++d) {
        SimConfig day_cfg = cfg;
        day_cfg.seed = derive_seed(seed, 100 + d);
        char name[32];
        std::snprintf(name, sizeof(name), "day%03d", d);
        const SimDay sd = generate_day(day_cfg, name);
        write_day_csv((fs::path(out_dir) / (std::string(name) + ".csv")).string(), sd.day,
                      {"true_co2_ppm"}, {sd.true_co2});
    }
    std::cout << "wrote " << days << " day(s) to " << out_dir << "\n";
    return 0;
}

int cmd_smooth(const std::string& in_path, const std::string& out_path, double lambda,
               bool local) {
    const DayCsv data = load_day_csv_full(in_path);
    const SmoothConfig cfg{lambda};
    std::vector<double> smoothed;
    if (local) {
        // causal smoothing evaluated at each prefix endpoint
        smoothed.resize(data.day.size());
        smoothed[0] = data.day.co2[0];
        std::vector<double> prefix;
        prefix.reserve(data.day.size());
        prefix.push_back(data.day.co2[0]);
        for (std::size_t k = 1; k < data.day.size(); ++k) {
            prefix.push_back(data.day.co2[k]);
            smoothed[k] = smooth_local(prefix, cfg).back();
        }
    } else {
        smoothed = smooth_global(data.day.co2, cfg);
    }
    auto names = data.extra_names;
    auto cols = data.extra_cols;
    names.push_back("co2_smoothed_ppm");
    cols.push_back(smoothed);
    write_day_csv(out_path, data.day, names, cols);
    return 0;
}

int cmd_train(const std::string& train_dir, const HorizonConfig& horizon, int hidden,
              double gamma, const std::string& targets_spec, int candidates, std::uint64_t seed,
              const std::string& mode, const std::string& smooth, double lambda, int threads,
              const std::string& out_path) {
    env_seed(seed);
    TrainOptions opts;
    opts.hidden = hidden;
    opts.gamma = gamma;
    opts.targets = parse_targets(targets_spec);
    opts.candidates = candidates;
    opts.master_seed = seed;
    opts.threads = threads;
    if (mode == "fs")
        opts.mode = ModelMode::fs_elm;
    else if (mode == "standard")
        opts.mode = ModelMode::standard_elm;
    else
        throw ConfigError("--mode must be fs or standard");
    const bool do_smooth = smooth == "global";
    if (!do_smooth && smooth != "none")
        throw ConfigError("--smooth must be global or none");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(train_dir))
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv files in " + train_dir);

    TrainingSet set;
    for (const auto& f : files) {
        const DayRecord day = load_day_csv(f.string());
        std::vector<double> co2 = day.co2;
        if (do_smooth) co2 = smooth_global(co2, SmoothConfig{lambda});
        std::vector<double> occ(day.occupancy.begin(), day.occupancy.end());
        for (int k = horizon.l; k < static_cast<int>(day.size()); ++k) {
            set.inputs.push_back(window_at(co2, occ, day.venting, k, horizon));
            set.targets.push_back(static_cast<double>(day.occupancy[k]));
        }
    }
    const FsElmModel model = train(set, horizon, opts);
    save_model(out_path, model);
    std::cout << "trained on " << set.inputs.size() << " windows from " << files.size()
              << " day(s); training rmse " << model.training_rmse << "; model -> " << out_path
              << "\n";
    return 0;
}

int cmd_estimate(const std::string& model_path, const std::string& day_path,
                 const std::string& smoothing, double lambda, const std::string& feedback,
                 int window, const std::string& out_path) {
    const FsElmModel model = load_model(model_path);
    const DayRecord day = load_day_csv(day_path);
    EstimationConfig cfg;
    cfg.lambda = lambda;
    cfg.reestimation_window = window;
    if (feedback == "clamped")
        cfg.feedback = FeedbackMode::clamped;
    else if (feedback == "rounded")
        cfg.feedback = FeedbackMode::rounded;
    else
        throw ConfigError("--feedback must be clamped or rounded");

    EstimateTrace trace;
    if (smoothing == "none") {
        cfg.smoothing = SmoothingMode::none;
        trace = estimate_day_feedback(model, day, cfg);
    } else if (smoothing == "global") {
        cfg.smoothing = SmoothingMode::global;
        trace = estimate_day_feedback(model, day, cfg);
    } else if (smoothing == "local") {
        cfg.smoothing = SmoothingMode::local;
        trace = estimate_day_local(model, day, cfg);
    } else {
        throw ConfigError("--smoothing must be none, global or local");
    }
    write_estimates_csv(out_path, trace, &day);
    return 0;
}

int cmd_evaluate(const std::string& estimates_path, const std::string& tolerances_spec,
                 const std::string& format) {
    const EstimatesCsv data = load_estimates_csv(estimates_path);
    if (!data.has_truth)
        throw DataError(estimates_path + ": truth_occupancy column required for evaluation");
    std::vector<int> truth, rounded;
    std::vector<double> clamped;
    for (std::size_t k = 0; k < data.minute.size(); ++k) {
        if (!data.trace.has_estimate[k]) continue;
        truth.push_back(data.truth[k]);
        rounded.push_back(data.trace.rounded[k]);
        clamped.push_back(data.trace.clamped[k]);
    }
    const MetricsReport rep =
        compute_metrics(truth, rounded, clamped, parse_tolerances(tolerances_spec));
    ReportFormat fmt;
    if (format == "json")
        fmt = ReportFormat::json;
    else if (format == "text")
        fmt = ReportFormat::text;
    else if (format == "csv")
        fmt = ReportFormat::csv;
    else
        throw ConfigError("--format must be json, text or csv");
    std::cout << emit_report(rep, fmt);
    return 0;
}

int cmd_plot(const std::string& estimates_path, const std::vector<std::string>& report_specs,
             const std::string& out_path) {
    if (!estimates_path.empty()) {
        plot_estimates(estimates_path, out_path);
        return 0;
    }
    if (report_specs.empty())
        throw ConfigError("plot needs --estimates or at least one --report label=path");
    std::vector<std::pair<std::string, std::map<int, double>>> curves;
    for (const auto& spec : report_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("--report expects label=path");
        std::ifstream in(spec.substr(eq + 1));
        if (!in) throw DataError("cannot open " + spec.substr(eq + 1));
        std::stringstream ss;
        ss << in.rdbuf();
        const MetricsReport rep = parse_report_json(ss.str());
        curves.emplace_back(spec.substr(0, eq), rep.tolerance_curve);
    }
    write_text_file(out_path, plot_tolerance_curves_svg(curves));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CO2-based indoor occupancy estimation"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate synthetic days from the zone model");
    std::string sim_config, sim_out = "data";
    int sim_days = 30;
    std::uint64_t sim_seed = 1;
    sim->add_option("--config", sim_config, "Simulator config JSON");
    sim->add_option("--days", sim_days, "Number of days");
    sim->add_option("--out-dir", sim_out, "Output directory");
    sim->add_option("--seed", sim_seed, "Master seed");

    // smooth
    auto* smo = app.add_subcommand("smooth", "Laplacian-smooth a day CSV");
    std::string smo_in, smo_out = "smoothed.csv";
    double smo_lambda = 50.0;
    bool smo_local = false;
    smo->add_option("input", smo_in, "Day CSV")->required();
    smo->add_option("--out", smo_out, "Output CSV");
    smo->add_option("--lambda", smo_lambda, "Smoothing weight");
    smo->add_flag("--local", smo_local, "Causal smoothing at each prefix endpoint");

    // train
    auto* trn = app.add_subcommand("train", "Train an occupancy estimator");
    std::string trn_dir, trn_targets = "1,1,1,1,0.1", trn_mode = "fs", trn_smooth = "global";
    std::string trn_out = "model.json";
    HorizonConfig trn_horizon;
    int trn_hidden = 1000, trn_candidates = 100, trn_threads = 0;
    double trn_gamma = 0.001, trn_lambda = 50.0;
    std::uint64_t trn_seed = 1;
    trn->add_option("--train-dir", trn_dir, "Directory of day CSVs")->required();
    trn->add_option("--l", trn_horizon.l, "Horizon length");
    trn->add_option("--s", trn_horizon.s, "Integration stride");
    trn->add_option("--hidden", trn_hidden, "Hidden neuron count");
    trn->add_option("--gamma", trn_gamma, "Ridge parameter");
    trn->add_option("--targets", trn_targets, "Five z-max targets");
    trn->add_option("--candidates", trn_candidates, "Random-matrix candidates");
    trn->add_option("--seed", trn_seed, "Master seed");
    trn->add_option("--mode", trn_mode, "fs|standard");
    trn->add_option("--smooth", trn_smooth, "global|none");
    trn->add_option("--lambda", trn_lambda, "Smoothing weight");
    trn->add_option("--threads", trn_threads, "Worker threads (0 = auto)");
    trn->add_option("--out", trn_out, "Model output path");

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate a day with a trained model");
    std::string est_model, est_day, est_smoothing = "none", est_feedback = "clamped";
    std::string est_out = "estimates.csv";
    double est_lambda = 50.0;
    int est_window = 0;
    est->add_option("--model", est_model, "Model JSON")->required();
    est->add_option("--day", est_day, "Day CSV")->required();
    est->add_option("--smoothing", est_smoothing, "none|global|local");
    est->add_option("--lambda", est_lambda, "Smoothing weight");
    est->add_option("--feedback", est_feedback, "clamped|rounded");
    est->add_option("--window", est_window, "Re-estimation window (0 = full prefix)");
    est->add_option("--out", est_out, "Estimates CSV output path");

    // evaluate
    auto* evl = app.add_subcommand("evaluate", "Compute metrics for an estimates CSV");
    std::string evl_estimates, evl_tolerances = "0..10", evl_format = "text";
    evl->add_option("--estimates", evl_estimates, "Estimates CSV")->required();
    evl->add_option("--tolerances", evl_tolerances, "Range a..b or comma list");
    evl->add_option("--format", evl_format, "json|text|csv");

    // plot
    auto* plt = app.add_subcommand("plot", "Render an SVG plot");
    std::string plt_estimates, plt_out = "plot.svg";
    std::vector<std::string> plt_reports;
    plt->add_option("--estimates", plt_estimates, "Estimates CSV (truth/estimate traces)");
    plt->add_option("--report", plt_reports, "label=metrics.json (tolerance curves)");
    plt->add_option("--out", plt_out, "SVG output path");

    // pipeline
    auto* pip = app.add_subcommand("pipeline", "Run the full simulate/train/evaluate pipeline");
    std::string pip_config;
    std::vector<std::string> pip_sets;
    bool pip_print = false;
    int pip_days = -1, pip_train = -1, pip_test = -1;
    pip->add_option("--config", pip_config, "Pipeline config JSON");
    pip->add_option("--set", pip_sets, "key=value overrides");
    pip->add_option("--days", pip_days, "Total days (train + test)");
    pip->add_option("--train", pip_train, "Training days");
    pip->add_option("--test", pip_test, "Held-out test days");
    pip->add_flag("--print-config", pip_print, "Print the effective config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_days, sim_out, sim_seed);
        if (smo->parsed()) return cmd_smooth(smo_in, smo_out, smo_lambda, smo_local);
        if (trn->parsed())
            return cmd_train(trn_dir, trn_horizon, trn_hidden, trn_gamma, trn_targets,
                             trn_candidates, trn_seed, trn_mode, trn_smooth, trn_lambda,
                             trn_threads, trn_out);
        if (est->parsed())
            return cmd_estimate(est_model, est_day, est_smoothing, est_lambda, est_feedback,
                                est_window, est_out);
        if (evl->parsed()) return cmd_evaluate(evl_estimates, evl_tolerances, evl_format);
        if (plt->parsed()) return cmd_plot(plt_estimates, plt_reports, plt_out);
        if (pip->parsed()) {
            PipelineConfig cfg;
            if (!pip_config.empty()) {
                std::ifstream in(pip_config);
                if (!in) throw DataError("cannot open " + pip_config);
                std::stringstream ss;
                ss << in.rdbuf();
                cfg = pipeline_config_from_json(ss.str());
            }
            for (const auto& kv : pip_sets) apply_config_override(cfg, kv);
            if (pip_train > 0) cfg.train_days = pip_train;
            if (pip_days > 0)
                cfg.days = pip_days;
            else if (pip_train > 0 && pip_test > 0)
                cfg.days = pip_train + pip_test;
            if (pip_test > 0 && cfg.days != cfg.train_days + pip_test)
                throw ConfigError("pipeline: --days must equal --train + --test");
            env_seed(cfg.master_seed);
            if (pip_print) {
                std::cout << pipeline_config_to_json(cfg);
                return 0;
            }
            const PipelineResult result = run_pipeline(cfg);
            for (const auto& [v, rep] : result.metrics)
                std::cout << variant_name(v) << ": test rmse " << rep.rmse << ", fdr " << rep.fdr
                          << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
