#include <doctest.h>

#include <Eigen/Dense>

#include "co2occ/errors.hpp"
#include "co2occ/features.hpp"

using namespace co2occ;

TEST_CASE("feature dimensions and layout, l=30 s=10") {
    const HorizonConfig cfg{30, 10};
    const FeatureMatrix fm = build_feature_matrix(cfg);
    CHECK(fm.w1.rows() == 143);
    CHECK(fm.w1.cols() == 92);
    const auto blk = feature_block_layout(cfg);
    CHECK(blk.p_len == 31);
    CHECK(blk.i_len == 21);
    CHECK(blk.d_len == 30);
    CHECK(blk.o_len == 30);
    CHECK(blk.v_len == 31);
    CHECK(blk.v_start + blk.v_len == cfg.feature_dim());
}

TEST_CASE("feature matrix entries in {-1,0,1}, at most two nonzeros per row") {
    const FeatureMatrix fm = build_feature_matrix(HorizonConfig{30, 10});
    for (Eigen::Index r = 0; r < fm.w1.rows(); ++r) {
        int nonzeros = 0;
        for (Eigen::Index c = 0; c < fm.w1.cols(); ++c) {
            const double v = fm.w1(r, c);
            CHECK((v == -1.0 || v == 0.0 || v == 1.0));
            if (v != 0.0) ++nonzeros;
        }
        CHECK(nonzeros >= 1);
        CHECK(nonzeros <= 2);
    }
}

TEST_CASE("ramp input, l=3 s=2: P passes through, I and D difference") {
    const HorizonConfig cfg{3, 2};
    InputWindow x;
    x.co2_window = {0.0, 1.0, 2.0, 3.0};
    x.occ_window = {4.0, 5.0, 6.0};
    x.vent_window = {1.0, 0.0, 1.0, 0.0};
    const FeatureVector f = apply_features(build_feature_matrix(cfg), x);
    REQUIRE(f.p.size() == 4);
    REQUIRE(f.i.size() == 2);
    REQUIRE(f.d.size() == 3);
    CHECK(f.p[0] == 0.0);
    CHECK(f.p[3] == 3.0);
    // s-step differences c[j+2]-c[j]
    CHECK(f.i[0] == 2.0);
    CHECK(f.i[1] == 2.0);
    // first differences
    CHECK(f.d[0] == 1.0);
    CHECK(f.d[1] == 1.0);
    CHECK(f.d[2] == 1.0);
    // pass-through
    CHECK(f.occ[0] == 4.0);
    CHECK(f.occ[2] == 6.0);
    CHECK(f.vent[0] == 1.0);
    CHECK(f.vent[3] == 0.0);
}

TEST_CASE("apply_features equals the definitional matrix product") {
    const HorizonConfig cfg{7, 3};
    const FeatureMatrix fm = build_feature_matrix(cfg);
    InputWindow x;
    for (int i = 0; i <= cfg.l; ++i) x.co2_window.push_back(400.0 + 13.7 * i);
    for (int i = 0; i < cfg.l; ++i) x.occ_window.push_back(2.0 * i - 3.0);
    for (int i = 0; i <= cfg.l; ++i) x.vent_window.push_back(i % 2);
    const Eigen::VectorXd direct = fm.w1 * x.flatten();
    const Eigen::VectorXd split = apply_features(fm, x).flatten();
    REQUIRE(direct.size() == split.size());
    for (Eigen::Index i = 0; i < direct.size(); ++i) CHECK(direct[i] == split[i]);
}

TEST_CASE("split round-trips flatten") {
    const HorizonConfig cfg{5, 2};
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(cfg.feature_dim(), 0.0, 1.0);
    const FeatureVector f = split_feature_blocks(y, cfg);
    const Eigen::VectorXd back = f.flatten();
    for (Eigen::Index i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
    CHECK_THROWS_AS(split_feature_blocks(Eigen::VectorXd::Zero(3), cfg), ConfigError);
}
