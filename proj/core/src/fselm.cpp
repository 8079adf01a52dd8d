#include "co2occ/fselm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <iostream>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>

#include "co2occ/errors.hpp"
#include "co2occ/rng.hpp"

namespace co2occ {

void ScaleParams::validate() const {
    for (double a : {p, i, d, o, v})
        if (!(a > 0.0) || !std::isfinite(a))
            throw ConfigError("scale parameters must be positive and finite");
}

void ZmaxTargets::validate() const {
    for (double t : {p, i, d, o, v})
        if (!(t > 0.0) || !std::isfinite(t))
            throw ConfigError("z-max targets must be positive and finite");
    if (!(sum() < 5.0))
        throw ConfigError("z-max targets must sum to less than 5");
}

double sigmoid(double z) {
    // exp(-z) overflows to inf for z < -709 and 1/(1+inf) = 0, so the
    // single-branch form is safe over the whole double range.
    return 1.0 / (1.0 + std::exp(-z));
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd>
generate_random_layer(std::uint64_t seed, int hidden, int cols) {
    if (hidden < 1 || cols < 1) throw ConfigError("generate_random_layer: bad dimensions");
    Rng rng(seed);
    Eigen::MatrixXd w(hidden, cols);
    for (int i = 0; i < hidden; ++i)
        for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd b(hidden);
    for (int i = 0; i < hidden; ++i) b[i] = rng.uniform(-0.1, 0.1);
    return {std::move(w), std::move(b)};
}

namespace {

constexpr int kChunk = 4096;

/// Per-feature-row alpha values, i.e. the diagonal of S.
Eigen::VectorXd scale_diagonal(const ScaleParams& scale, const HorizonConfig& config) {
    const auto blk = feature_block_layout(config);
    Eigen::VectorXd diag(config.feature_dim());
    diag.segment(blk.p_start, blk.p_len).setConstant(scale.p);
    diag.segment(blk.i_start, blk.i_len).setConstant(scale.i);
    diag.segment(blk.d_start, blk.d_len).setConstant(scale.d);
    diag.segment(blk.o_start, blk.o_len).setConstant(scale.o);
    diag.segment(blk.v_start, blk.v_len).setConstant(scale.v);
    return diag;
}

/// max_k ||R_s y_k^s||_inf for one block, chunked over samples.
double block_zmax(const Eigen::MatrixXd& r, const Eigen::MatrixXd& features, int start, int len) {
    double zmax = 0.0;
    const Eigen::Index n = features.cols();
    for (Eigen::Index c0 = 0; c0 < n; c0 += kChunk) {
        const Eigen::Index nc = std::min<Eigen::Index>(kChunk, n - c0);
        const Eigen::MatrixXd z =
            r.middleCols(start, len) * features.block(start, c0, len, nc);
        zmax = std::max(zmax, z.cwiseAbs().maxCoeff());
    }
    return zmax;
}

double ratio_or_one(double target, double zmax, const char* block) {
    if (zmax == 0.0) {
        std::cerr << "co2occ: warning: feature block '" << block
                  << "' is identically zero over the training set; alpha set to 1\n";
        return 1.0;
    }
    return target / zmax;
}

} // namespace

ScaleParams design_scale(const Eigen::MatrixXd& r, const Eigen::MatrixXd& features,
                         const HorizonConfig& config, const ZmaxTargets& targets) {
    targets.validate();
    if (features.cols() == 0) throw ConfigError("design_scale: empty training set");
    if (features.rows() != config.feature_dim() || r.cols() != config.feature_dim())
        throw ConfigError("design_scale: dimension mismatch");
    const auto blk = feature_block_layout(config);
    ScaleParams scale;
    scale.p = ratio_or_one(targets.p, block_zmax(r, features, blk.p_start, blk.p_len), "P");
    scale.i = ratio_or_one(targets.i, block_zmax(r, features, blk.i_start, blk.i_len), "I");
    scale.d = ratio_or_one(targets.d, block_zmax(r, features, blk.d_start, blk.d_len), "D");
    scale.o = ratio_or_one(targets.o, block_zmax(r, features, blk.o_start, blk.o_len), "occ");
    scale.v = ratio_or_one(targets.v, block_zmax(r, features, blk.v_start, blk.v_len), "vent");
    return scale;
}

void FsElmModel::finalize() {
    config.validate();
    if (mode == ModelMode::fs_elm) {
        const FeatureMatrix fm = build_feature_matrix(config);
        if (r.cols() != config.feature_dim())
            throw ConfigError("model: R has wrong column count for fs_elm mode");
        w_eff_ = (r * scale_diagonal(scale, config).asDiagonal()) * fm.w1;
    } else {
        if (r.cols() != config.input_dim())
            throw ConfigError("model: W has wrong column count for standard_elm mode");
        w_eff_ = r;
    }
    if (bias.size() != r.rows())
        throw ConfigError("model: bias length does not match hidden count");
}

Eigen::VectorXd preactivations(const FsElmModel& model, const InputWindow& x) {
    const Eigen::VectorXd flat = x.flatten();
    if (flat.size() != model.effective_weights().cols())
        throw ConfigError("preactivations: input window dimension mismatch");
    return model.effective_weights() * flat + model.bias;
}

Eigen::VectorXd hidden_outputs(const FsElmModel& model, const InputWindow& x) {
    Eigen::VectorXd z = preactivations(model, x);
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
    return z;
}

double predict(const FsElmModel& model, const InputWindow& x) {
    if (model.beta.size() != model.r.rows())
        throw ConfigError("predict: untrained model (beta missing)");
    return hidden_outputs(model, x).dot(model.beta);
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& h_matrix, const Eigen::VectorXd& targets,
                            double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("solve_ridge: gamma must be > 0");
    if (h_matrix.rows() != targets.size())
        throw ConfigError("solve_ridge: row count does not match target count");
    Eigen::MatrixXd a = h_matrix.transpose() * h_matrix;
    a.diagonal().array() += gamma;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericError("solve_ridge: factorization failed");
    return llt.solve(h_matrix.transpose() * targets);
}

namespace {

struct CandidateFit {
    double rmse = std::numeric_limits<double>::infinity();
    ScaleParams scale;
    Eigen::VectorXd beta;
};

void sigmoid_inplace(Eigen::Ref<Eigen::MatrixXd> z) {
    z = (1.0 + (-z.array()).exp()).inverse();
}

/// Fits one candidate: H over the training samples, beta from the ridge
/// system gamma*I + H^T H, then the training RMSE.
CandidateFit fit_candidate(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                           const ScaleParams& scale, const Eigen::MatrixXd& data,
                           const Eigen::VectorXd& targets, double gamma,
                           Eigen::MatrixXd& h) {
    const Eigen::Index hidden = weights.rows();
    const Eigen::Index n = data.cols();
    h.resize(hidden, n);
    for (Eigen::Index c0 = 0; c0 < n; c0 += kChunk) {
        const Eigen::Index nc = std::min<Eigen::Index>(kChunk, n - c0);
        h.middleCols(c0, nc).noalias() = weights * data.middleCols(c0, nc);
        h.middleCols(c0, nc).colwise() += bias;
        sigmoid_inplace(h.middleCols(c0, nc));
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(hidden, hidden);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h);
    gram.diagonal().array() += gamma;
    // LLT reads only the lower triangle, which rankUpdate filled.
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericError("train: ridge factorization failed");

    CandidateFit fit;
    fit.scale = scale;
    fit.beta = llt.solve(h * targets);
    fit.rmse = std::sqrt((h.transpose() * fit.beta - targets).squaredNorm() /
                         static_cast<double>(n));
    return fit;
}

} // namespace

FsElmModel train(const TrainingSet& data, const HorizonConfig& config, const TrainOptions& opts) {
    config.validate();
    const std::size_t n = data.inputs.size();
    if (n == 0 || data.targets.size() != n)
        throw ConfigError("train: empty or inconsistent training set");
    if (opts.hidden < 1) throw ConfigError("train: hidden count must be >= 1");
    if (!(opts.gamma > 0.0)) throw ConfigError("train: gamma must be > 0");
    opts.targets.validate();
    if (static_cast<int>(n) < opts.hidden)
        std::cerr << "co2occ: warning: " << n << " training samples for " << opts.hidden
                  << " hidden neurons\n";

    std::vector<std::uint64_t> seeds = opts.seeds;
    if (seeds.empty()) {
        if (opts.candidates < 1) throw ConfigError("train: need at least one candidate");
        seeds.reserve(opts.candidates);
        for (int i = 0; i < opts.candidates; ++i) seeds.push_back(derive_seed(opts.master_seed, i));
    }

    const bool fs = opts.mode == ModelMode::fs_elm;
    const int cols = fs ? config.feature_dim() : config.input_dim();

    // Flattened inputs as columns; fs mode works on the feature layer output.
    Eigen::MatrixXd x(config.input_dim(), n);
    Eigen::VectorXd o(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::VectorXd flat = data.inputs[k].flatten();
        if (flat.size() != config.input_dim())
            throw ConfigError("train: input window dimension mismatch at sample " +
                              std::to_string(k));
        x.col(k) = flat;
        o[k] = data.targets[k];
    }
    Eigen::MatrixXd features;
    if (fs) features = build_feature_matrix(config).w1 * x;
    const Eigen::MatrixXd& layer_input = fs ? features : x;

    std::vector<CandidateFit> fits(seeds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        Eigen::MatrixXd h;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            try {
                auto [r, b] = generate_random_layer(seeds[i], opts.hidden, cols);
                ScaleParams scale;
                if (fs) {
                    scale = design_scale(r, features, config, opts.targets);
                    r = r * scale_diagonal(scale, config).asDiagonal();
                }
                fits[i] = fit_candidate(r, b, scale, layer_input, o, opts.gamma, h);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    unsigned nthreads = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                         : std::thread::hardware_concurrency();
    nthreads = std::max(1u, std::min<unsigned>(nthreads, seeds.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    // Selection is by value then seed index, independent of execution order.
    std::size_t best = 0;
    for (std::size_t i = 1; i < fits.size(); ++i)
        if (fits[i].rmse < fits[best].rmse) best = i;

    FsElmModel model;
    model.mode = opts.mode;
    model.config = config;
    model.hidden = opts.hidden;
    model.gamma = opts.gamma;
    model.seed = seeds[best];
    model.targets = opts.targets;
    model.scale = fits[best].scale;
    auto [r, b] = generate_random_layer(seeds[best], opts.hidden, cols);
    model.r = std::move(r);
    model.bias = std::move(b);
    model.beta = fits[best].beta;
    model.training_rmse = fits[best].rmse;
    model.clamp_max = *std::max_element(data.targets.begin(), data.targets.end());
    model.finalize();
    return model;
}

TargetGridResult grid_search_targets(const TrainingSet& train_set, const TrainingSet& holdout,
                                     const HorizonConfig& config,
                                     const std::vector<ZmaxTargets>& grid, TrainOptions opts) {
    if (grid.empty()) throw ConfigError("grid_search_targets: empty grid");
    if (holdout.inputs.empty()) throw ConfigError("grid_search_targets: empty holdout set");
    TargetGridResult result;
    result.holdout_rmse.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        opts.targets = grid[g];
        const FsElmModel model = train(train_set, config, opts);
        double sq = 0.0;
        for (std::size_t k = 0; k < holdout.inputs.size(); ++k) {
            const double e = predict(model, holdout.inputs[k]) - holdout.targets[k];
            sq += e * e;
        }
        result.holdout_rmse.push_back(std::sqrt(sq / holdout.inputs.size()));
        if (result.holdout_rmse[g] < result.holdout_rmse[result.best_index])
            result.best_index = g;
    }
    return result;
}

} // namespace co2occ
