#include <doctest.h>

#include <string>

#include "co2occ/errors.hpp"
#include "co2occ/pipeline.hpp"

using namespace co2occ;

TEST_CASE("variant names") {
    CHECK(std::string(variant_name(Variant::standard_elm)) == "standard_elm");
    CHECK(std::string(variant_name(Variant::fs_raw)) == "fs_raw");
    CHECK(std::string(variant_name(Variant::fs_global)) == "fs_global");
    CHECK(std::string(variant_name(Variant::fs_local)) == "fs_local");
}

TEST_CASE("pipeline config json round trip") {
    PipelineConfig cfg;
    cfg.hidden = 123;
    cfg.days = 9;
    cfg.train_days = 7;
    cfg.master_seed = 5150;
    cfg.sim.max_occupancy = 14;
    cfg.targets.v = 0.2;
    const std::string json = pipeline_config_to_json(cfg);
    const PipelineConfig back = pipeline_config_from_json(json);
    CHECK(back.hidden == 123);
    CHECK(back.days == 9);
    CHECK(back.train_days == 7);
    CHECK(back.master_seed == 5150);
    CHECK(back.sim.max_occupancy == 14);
    CHECK(back.targets.v == 0.2);
    CHECK(back.lambda == cfg.lambda);
}

TEST_CASE("config overrides") {
    PipelineConfig cfg;
    apply_config_override(cfg, "hidden=64");
    apply_config_override(cfg, "candidates=3");
    apply_config_override(cfg, "seed=99");
    apply_config_override(cfg, "out_dir=/tmp/x");
    apply_config_override(cfg, "sim.noise_std_ppm=7.5");
    apply_config_override(cfg, "targets.p=0.8");
    apply_config_override(cfg, "feedback=rounded");
    CHECK(cfg.hidden == 64);
    CHECK(cfg.candidates == 3);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.out_dir == "/tmp/x");
    CHECK(cfg.sim.noise_std_ppm == 7.5);
    CHECK(cfg.targets.p == 0.8);
    CHECK(cfg.feedback == FeedbackMode::rounded);

    CHECK_THROWS_AS(apply_config_override(cfg, "no_equals"), ConfigError);
    CHECK_THROWS_AS(apply_config_override(cfg, "unknown_key=1"), ConfigError);
    CHECK_THROWS_AS(apply_config_override(cfg, "feedback=sideways"), ConfigError);
}

TEST_CASE("pipeline config validation") {
    PipelineConfig cfg;
    cfg.train_days = cfg.days;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = PipelineConfig{};
    cfg.out_dir.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(PipelineConfig{}.validate());
}
