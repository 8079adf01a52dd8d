#ifndef CO2OCC_FSELM_HPP
#define CO2OCC_FSELM_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "co2occ/features.hpp"
#include "co2occ/timeseries.hpp"

namespace co2occ {

enum class ModelMode { standard_elm, fs_elm };

/// The five block scale factors of the diagonal scale matrix S.
struct ScaleParams {
    double p = 1.0;
    double i = 1.0;
    double d = 1.0;
    double o = 1.0;
    double v = 1.0;

    void validate() const;
};

/// Per-block targets for the max pre-activation magnitude; their sum must
/// stay below the sigmoid saturation bound of 5.
struct ZmaxTargets {
    double p = 1.0;
    double i = 1.0;
    double d = 1.0;
    double o = 1.0;
    double v = 0.1;

    double sum() const { return p + i + d + o + v; }
    void validate() const;
};

struct TrainingSet {
    std::vector<InputWindow> inputs;
    std::vector<double> targets;
};

/// A trained (immutable) regressor. In fs_elm mode r is L x n_f and the
/// effective input-to-hidden map is R*S*W1; in standard_elm mode r is L x n
/// applied to the raw window.
struct FsElmModel {
    ModelMode mode = ModelMode::fs_elm;
    HorizonConfig config;
    int hidden = 1000;
    double gamma = 0.001;
    std::uint64_t seed = 0; // winning candidate sub-seed
    ZmaxTargets targets;
    ScaleParams scale;
    Eigen::MatrixXd r;
    Eigen::VectorXd bias;
    Eigen::VectorXd beta;
    double clamp_max = 0.0;
    double training_rmse = 0.0;

    /// Rebuilds the cached folded weight matrix; must be called after
    /// construction or deserialization, before predict.
    void finalize();

    const Eigen::MatrixXd& effective_weights() const { return w_eff_; }

private:
    Eigen::MatrixXd w_eff_; // L x n
};

struct TrainOptions {
    int hidden = 1000;
    double gamma = 0.001;
    ZmaxTargets targets;
    std::uint64_t master_seed = 1;
    int candidates = 100;
    ModelMode mode = ModelMode::fs_elm;
    int threads = 0; // 0 = hardware concurrency
    /// Explicit candidate sub-seeds; when empty they are derived from
    /// master_seed by counter.
    std::vector<std::uint64_t> seeds;
};

double sigmoid(double z);

/// Draws an L x cols matrix with entries U(-1,1) followed by an L bias
/// vector with entries U(-0.1,0.1), row-major order, from the co2occ-rng-v1
/// generator. Identical seeds give bit-identical results.
std::pair<Eigen::MatrixXd, Eigen::VectorXd>
generate_random_layer(std::uint64_t seed, int hidden, int cols);

/// Three-step scale design: per feature block, z'_max = max_k ||R_s y_k^s||_inf
/// over the training features (columns of `features`, n_f x N), then
/// alpha_s = target_s / z'_max. A block with z'_max = 0 gets alpha_s = 1.
ScaleParams design_scale(const Eigen::MatrixXd& r, const Eigen::MatrixXd& features,
                         const HorizonConfig& config, const ZmaxTargets& targets);

/// Pre-activations z = R*S*W1*x + b (fs mode) or W*x + b (standard mode).
Eigen::VectorXd preactivations(const FsElmModel& model, const InputWindow& x);

Eigen::VectorXd hidden_outputs(const FsElmModel& model, const InputWindow& x);

/// Ridge solve beta = (gamma*I + H^T H)^-1 H^T O via an LLT factorization.
/// h_matrix is N x L, row k the hidden outputs for sample k.
Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& h_matrix, const Eigen::VectorXd& targets,
                            double gamma);

FsElmModel train(const TrainingSet& data, const HorizonConfig& config, const TrainOptions& opts);

/// Raw real-valued estimate; clamping is the estimator module's job.
double predict(const FsElmModel& model, const InputWindow& x);

/// Cross-validation helper: trains one model per candidate target tuple and
/// scores it by plain regression RMSE on the held-out windows. Returns the
/// index of the best tuple (ties to the lowest index).
struct TargetGridResult {
    std::size_t best_index = 0;
    std::vector<double> holdout_rmse;
};
TargetGridResult grid_search_targets(const TrainingSet& train_set, const TrainingSet& holdout,
                                     const HorizonConfig& config,
                                     const std::vector<ZmaxTargets>& grid, TrainOptions opts);

} // namespace co2occ

#endif
