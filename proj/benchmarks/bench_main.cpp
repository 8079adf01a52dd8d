#include <benchmark/benchmark.h>

#include <vector>

#include "co2occ/estimator.hpp"
#include "co2occ/fselm.hpp"
#include "co2occ/rng.hpp"
#include "co2occ/simulator.hpp"
#include "co2occ/smoothing.hpp"

using namespace co2occ;

namespace {

std::vector<double> noisy_series(int n) {
    Rng rng(17);
    std::vector<double> c(n);
    double v = 420.0;
    for (int i = 0; i < n; ++i) {
        v += rng.normal() * 5.0;
        c[i] = v;
    }
    return c;
}

FsElmModel bench_model(int hidden) {
    const HorizonConfig cfg{30, 10};
    FsElmModel model;
    model.mode = ModelMode::fs_elm;
    model.config = cfg;
    model.hidden = hidden;
    auto [r, b] = generate_random_layer(3, hidden, cfg.feature_dim());
    model.r = std::move(r);
    model.bias = std::move(b);
    model.beta = Eigen::VectorXd::Ones(hidden) / hidden;
    model.scale = ScaleParams{1e-3, 1e-2, 1e-1, 3e-2, 1e-1};
    model.clamp_max = 28.0;
    model.finalize();
    return model;
}

void bm_thomas_solve(benchmark::State& state) {
    const auto c = noisy_series(static_cast<int>(state.range(0)));
    const SmoothConfig cfg{50.0};
    for (auto _ : state) {
        auto out = smooth_global(c, cfg);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_thomas_solve)->Range(256, 16384)->Complexity(benchmark::oN);

void bm_predict(benchmark::State& state) {
    const FsElmModel model = bench_model(static_cast<int>(state.range(0)));
    const HorizonConfig& cfg = model.config;
    InputWindow x;
    for (int i = 0; i <= cfg.l; ++i) x.co2_window.push_back(450.0 + i);
    for (int i = 0; i < cfg.l; ++i) x.occ_window.push_back(3.0);
    for (int i = 0; i <= cfg.l; ++i) x.vent_window.push_back(1.0);
    for (auto _ : state) {
        double y = predict(model, x);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(bm_predict)->Arg(100)->Arg(1000);

void bm_estimate_day_feedback(benchmark::State& state) {
    const FsElmModel model = bench_model(1000);
    SimConfig sim;
    sim.seed = 9;
    const DayRecord day = generate_day(sim, "bench").day;
    EstimationConfig cfg;
    cfg.smoothing = SmoothingMode::global;
    for (auto _ : state) {
        EstimateTrace t = estimate_day_feedback(model, day, cfg);
        benchmark::DoNotOptimize(t.raw.data());
    }
}
BENCHMARK(bm_estimate_day_feedback)->Unit(benchmark::kMillisecond);

void bm_estimate_day_local(benchmark::State& state) {
    const FsElmModel model = bench_model(static_cast<int>(state.range(0)));
    SimConfig sim;
    sim.seed = 9;
    sim.minutes_per_day = 360; // quarter day keeps the O(M^2) loop tractable
    sim.vent_on_minute = 60;
    sim.vent_off_minute = 300;
    sim.arrival_start_min = 90;
    sim.arrival_end_min = 180;
    sim.departure_start_min = 240;
    sim.departure_end_min = 300;
    const DayRecord day = generate_day(sim, "bench").day;
    EstimationConfig cfg;
    cfg.smoothing = SmoothingMode::local;
    for (auto _ : state) {
        EstimateTrace t = estimate_day_local(model, day, cfg);
        benchmark::DoNotOptimize(t.raw.data());
    }
}
BENCHMARK(bm_estimate_day_local)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
