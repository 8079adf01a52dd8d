#ifndef CO2OCC_FEATURES_HPP
#define CO2OCC_FEATURES_HPP

#include <Eigen/Core>

#include "co2occ/timeseries.hpp"

namespace co2occ {

/// The fixed feature layer W1 = blkdiag{W_PID, I_{2l+1}} mapping a flattened
/// input window (dim 3l+2) to the feature vector (dim 5l-s+3). Entries are in
/// {-1, 0, 1} with at most two nonzeros per row.
struct FeatureMatrix {
    Eigen::MatrixXd w1;
    HorizonConfig config;
};

/// Feature blocks in the fixed order P, I, D, occ, vent. This ordering is
/// part of the model-file contract; the scale matrix and the R partition
/// both index into it.
struct FeatureVector {
    Eigen::VectorXd p;    // CO2 horizon, length l+1
    Eigen::VectorXd i;    // s-step integrated differences, length l-s+1
    Eigen::VectorXd d;    // first differences, length l
    Eigen::VectorXd occ;  // length l
    Eigen::VectorXd vent; // length l+1

    Eigen::VectorXd flatten() const;
};

FeatureMatrix build_feature_matrix(const HorizonConfig& config);

FeatureVector apply_features(const FeatureMatrix& w1, const InputWindow& x);

/// Splits a flat feature vector back into its five blocks.
FeatureVector split_feature_blocks(const Eigen::VectorXd& y, const HorizonConfig& config);

/// Offsets [start, length] of the five blocks inside a flat feature vector.
struct FeatureBlockLayout {
    int p_start, p_len;
    int i_start, i_len;
    int d_start, d_len;
    int o_start, o_len;
    int v_start, v_len;
};
FeatureBlockLayout feature_block_layout(const HorizonConfig& config);

} // namespace co2occ

#endif
