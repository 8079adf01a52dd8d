#include "co2occ/features.hpp"

#include "co2occ/errors.hpp"

namespace co2occ {

FeatureBlockLayout feature_block_layout(const HorizonConfig& config) {
    const int l = config.l;
    const int s = config.s;
    FeatureBlockLayout b{};
    b.p_start = 0;
    b.p_len = l + 1;
    b.i_start = b.p_start + b.p_len;
    b.i_len = l - s + 1;
    b.d_start = b.i_start + b.i_len;
    b.d_len = l;
    b.o_start = b.d_start + b.d_len;
    b.o_len = l;
    b.v_start = b.o_start + b.o_len;
    b.v_len = l + 1;
    return b;
}

Eigen::VectorXd FeatureVector::flatten() const {
    Eigen::VectorXd y(p.size() + i.size() + d.size() + occ.size() + vent.size());
    y << p, i, d, occ, vent;
    return y;
}

FeatureMatrix build_feature_matrix(const HorizonConfig& config) {
    config.validate();
    const int l = config.l;
    const int s = config.s;
    const int n = config.input_dim();
    const int nf = config.feature_dim();
    const auto blk = feature_block_layout(config);

    Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(nf, n);
    // P block: identity on the CO2 window.
    for (int j = 0; j <= l; ++j) w1(blk.p_start + j, j) = 1.0;
    // I block: c[j+s] - c[j].
    for (int j = 0; j <= l - s; ++j) {
        w1(blk.i_start + j, j + s) = 1.0;
        w1(blk.i_start + j, j) = -1.0;
    }
    // D block: c[j+1] - c[j].
    for (int j = 0; j < l; ++j) {
        w1(blk.d_start + j, j + 1) = 1.0;
        w1(blk.d_start + j, j) = -1.0;
    }
    // Identity pass-through for occupancy and venting.
    for (int j = 0; j < 2 * l + 1; ++j) w1(blk.o_start + j, l + 1 + j) = 1.0;

    return FeatureMatrix{std::move(w1), config};
}

FeatureVector split_feature_blocks(const Eigen::VectorXd& y, const HorizonConfig& config) {
    const auto blk = feature_block_layout(config);
    if (y.size() != config.feature_dim())
        throw ConfigError("split_feature_blocks: feature vector has wrong dimension");
    FeatureVector f;
    f.p = y.segment(blk.p_start, blk.p_len);
    f.i = y.segment(blk.i_start, blk.i_len);
    f.d = y.segment(blk.d_start, blk.d_len);
    f.occ = y.segment(blk.o_start, blk.o_len);
    f.vent = y.segment(blk.v_start, blk.v_len);
    return f;
}

FeatureVector apply_features(const FeatureMatrix& w1, const InputWindow& x) {
    const Eigen::VectorXd flat = x.flatten();
    if (flat.size() != w1.w1.cols())
        throw ConfigError("apply_features: input window dimension mismatch");
    return split_feature_blocks(w1.w1 * flat, w1.config);
}

} // namespace co2occ
