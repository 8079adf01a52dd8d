#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "co2occ/errors.hpp"
#include "co2occ/simulator.hpp"

using namespace co2occ;

TEST_CASE("step_zone closed forms") {
    SimConfig cfg;
    SUBCASE("outdoor level with venting and no people is a fixed point") {
        CHECK(step_zone(cfg.outdoor_ppm, 0, 1, cfg) == cfg.outdoor_ppm);
    }
    SUBCASE("steady state is outdoor + gen*o/vent_rate") {
        const int occ = 12;
        const double c_star = cfg.outdoor_ppm + cfg.gen_rate * occ / cfg.vent_rate_m3_min;
        CHECK(step_zone(c_star, occ, 1, cfg) == doctest::Approx(c_star).epsilon(1e-12));
    }
    SUBCASE("sealed zone rises by gen_rate/volume per person-minute") {
        const double c1 = step_zone(500.0, 1, 0, cfg);
        CHECK(c1 - 500.0 == doctest::Approx(cfg.gen_rate / cfg.volume_m3).epsilon(1e-12));
        CHECK(cfg.gen_rate / cfg.volume_m3 == doctest::Approx(0.55).epsilon(0.001));
    }
    SUBCASE("venting pulls concentration toward outdoor") {
        const double high = step_zone(1200.0, 0, 1, cfg);
        CHECK(high < 1200.0);
        CHECK(high > cfg.outdoor_ppm);
        const double low = step_zone(390.0, 0, 1, cfg);
        CHECK(low > 390.0);
    }
}

TEST_CASE("generated day is a deterministic function of the config") {
    SimConfig cfg;
    cfg.seed = 321;
    const SimDay a = generate_day(cfg, "d");
    const SimDay b = generate_day(cfg, "d");
    CHECK(a.day.co2 == b.day.co2);
    CHECK(a.day.occupancy == b.day.occupancy);
    CHECK(a.true_co2 == b.true_co2);

    cfg.seed = 322;
    const SimDay c = generate_day(cfg, "d");
    CHECK(a.day.co2 != c.day.co2);
}

TEST_CASE("generated day invariants") {
    SimConfig cfg;
    cfg.seed = 99;
    const SimDay sim = generate_day(cfg, "inv");
    const DayRecord& day = sim.day;
    REQUIRE(static_cast<int>(day.size()) == cfg.minutes_per_day);
    REQUIRE(sim.true_co2.size() == day.size());

    for (int t = 0; t < cfg.minutes_per_day; ++t) {
        CHECK(day.occupancy[t] >= 0);
        CHECK(day.occupancy[t] <= cfg.max_occupancy);
        CHECK(day.co2[t] >= 0.0);
        const int expected_vent = (t >= cfg.vent_on_minute && t < cfg.vent_off_minute) ? 1 : 0;
        CHECK(day.venting[t] == expected_vent);
    }
    for (int t = cfg.departure_end_min; t < cfg.minutes_per_day; ++t)
        CHECK(day.occupancy[t] == 0);
    for (int t = 0; t < cfg.arrival_start_min; ++t) CHECK(day.occupancy[t] == 0);
    // somebody showed up
    CHECK(*std::max_element(day.occupancy.begin(), day.occupancy.end()) > 0);
    CHECK(sim.true_co2[0] == cfg.initial_ppm);
}

TEST_CASE("noise-free simulation follows the mass balance exactly") {
    SimConfig cfg;
    cfg.noise_std_ppm = 0.0;
    cfg.spike_prob = 0.0;
    cfg.seed = 5;
    const SimDay sim = generate_day(cfg, "clean");
    for (std::size_t t = 0; t < sim.day.size(); ++t)
        CHECK(sim.day.co2[t] == sim.true_co2[t]);
    for (std::size_t t = 0; t + 1 < sim.day.size(); ++t) {
        const double next =
            step_zone(sim.true_co2[t], sim.day.occupancy[t], sim.day.venting[t], cfg);
        CHECK(sim.true_co2[t + 1] == next);
    }
}

TEST_CASE("spikes are one-sided") {
    SimConfig cfg;
    cfg.noise_std_ppm = 0.0;
    cfg.spike_prob = 0.2;
    cfg.seed = 17;
    const SimDay sim = generate_day(cfg, "spiky");
    int spiked = 0;
    for (std::size_t t = 0; t < sim.day.size(); ++t) {
        const double delta = sim.day.co2[t] - sim.true_co2[t];
        CHECK(delta >= -1e-12);
        if (delta > 1.0) {
            ++spiked;
            CHECK(delta >= cfg.spike_min_ppm - 1e-9);
            CHECK(delta <= cfg.spike_max_ppm + 1e-9);
        }
    }
    CHECK(spiked > 0);
}

TEST_CASE("sim config json round trip") {
    SimConfig cfg;
    cfg.volume_m3 = 123.0;
    cfg.max_occupancy = 17;
    cfg.seed = 4242;
    const auto path = (std::filesystem::temp_directory_path() / "co2occ_test_sim.json").string();
    {
        std::ofstream out(path);
        out << sim_config_to_json(cfg);
    }
    const SimConfig back = sim_config_from_json_file(path);
    CHECK(back.volume_m3 == 123.0);
    CHECK(back.max_occupancy == 17);
    CHECK(back.seed == 4242);
    CHECK(back.gen_rate == cfg.gen_rate);
    std::filesystem::remove(path);
}

TEST_CASE("sim config validation") {
    SimConfig cfg;
    cfg.volume_m3 = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.spike_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.vent_off_minute = cfg.vent_on_minute;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(SimConfig{}.validate());
}
