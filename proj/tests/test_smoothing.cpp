#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "co2occ/errors.hpp"
#include "co2occ/smoothing.hpp"

using namespace co2occ;

namespace {

std::vector<double> random_series(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(380.0, 1200.0);
    std::vector<double> c(n);
    for (auto& v : c) v = d(gen);
    return c;
}

/// Dense reference solve of (I + lambda*D) c_s = c via Eigen.
std::vector<double> dense_smooth(const std::vector<double>& c, double lambda) {
    const int n = static_cast<int>(c.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const bool interior = i > 0 && i < n - 1;
        a(i, i) = 1.0 + (interior ? 2.0 : 1.0) * lambda;
        if (i > 0) a(i, i - 1) = -lambda;
        if (i < n - 1) a(i, i + 1) = -lambda;
    }
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(c.data(), n);
    Eigen::VectorXd x = a.fullPivLu().solve(rhs);
    return {x.data(), x.data() + n};
}

double variance(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / v.size();
}

} // namespace

TEST_CASE("smoothing system structure, N=3 lambda=1") {
    const TridiagonalSystem sys = build_smoothing_system({5.0, 6.0, 7.0}, 1.0);
    CHECK(sys.diag == std::vector<double>{2.0, 3.0, 2.0});
    CHECK(sys.sub == std::vector<double>{-1.0, -1.0});
    CHECK(sys.sup == std::vector<double>{-1.0, -1.0});
    CHECK(sys.rhs == std::vector<double>{5.0, 6.0, 7.0});
}

TEST_CASE("thomas solver matches dense solve to 1e-9") {
    SmoothConfig cfg{50.0};
    const auto c = random_series(257, 42);
    const auto fast = smooth_global(c, cfg);
    const auto ref = dense_smooth(c, cfg.lambda);
    REQUIRE(fast.size() == ref.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast[i] - ref[i]) <= 1e-9);
}

TEST_CASE("thomas solver rejects a zero pivot") {
    TridiagonalSystem sys;
    sys.diag = {0.0, 1.0};
    sys.sub = {0.0};
    sys.sup = {0.0};
    sys.rhs = {1.0, 1.0};
    CHECK_THROWS_AS(solve_tridiagonal(sys), NumericError);
}

TEST_CASE("2x2 closed form") {
    const double lambda = 3.0;
    const double c1 = 10.0, c2 = 20.0;
    const auto out = smooth_global({c1, c2}, SmoothConfig{lambda});
    // inverse of [[1+l,-l],[-l,1+l]] is 1/(1+2l) * [[1+l,l],[l,1+l]]
    const double det = 1.0 + 2.0 * lambda;
    CHECK(out[0] == doctest::Approx(((1.0 + lambda) * c1 + lambda * c2) / det).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx((lambda * c1 + (1.0 + lambda) * c2) / det).epsilon(1e-12));
}

TEST_CASE("constant sequences are fixed points") {
    const std::vector<double> c(100, 612.5);
    const auto out = smooth_global(c, SmoothConfig{50.0});
    for (double v : out) CHECK(v == doctest::Approx(612.5).epsilon(1e-12));
}

TEST_CASE("smoothing preserves the sum") {
    const auto c = random_series(301, 7);
    const double before = std::accumulate(c.begin(), c.end(), 0.0);
    const auto out = smooth_global(c, SmoothConfig{50.0});
    const double after = std::accumulate(out.begin(), out.end(), 0.0);
    CHECK(after == doctest::Approx(before).epsilon(1e-10));
}

TEST_CASE("variance decreases monotonically in lambda") {
    const auto c = random_series(200, 11);
    double prev = variance(c);
    for (double lambda : {1.0, 10.0, 50.0, 500.0, 5000.0}) {
        const double v = variance(smooth_global(c, SmoothConfig{lambda}));
        CHECK(v <= prev + 1e-9);
        prev = v;
    }
}

TEST_CASE("lambda to infinity approaches the mean") {
    const auto c = random_series(64, 3);
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
    const auto out = smooth_global(c, SmoothConfig{1e9});
    for (double v : out) CHECK(v == doctest::Approx(mean).epsilon(1e-4));
}

TEST_CASE("lambda zero is the identity") {
    const auto c = random_series(50, 9);
    const auto out = smooth_global(c, SmoothConfig{0.0});
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(out[i] == doctest::Approx(c[i]).epsilon(1e-14));
}

TEST_CASE("impulse response is symmetric and positive") {
    std::vector<double> c(101, 0.0);
    c[50] = 1.0;
    const auto out = smooth_global(c, SmoothConfig{50.0});
    for (int i = 0; i < 50; ++i) CHECK(out[50 - i] == doctest::Approx(out[50 + i]).epsilon(1e-10));
    for (double v : out) CHECK(v > 0.0);
    CHECK(out[50] == *std::max_element(out.begin(), out.end()));
}

TEST_CASE("local smoothing equals global on the full prefix") {
    const auto c = random_series(400, 21);
    const auto g = smooth_global(c, SmoothConfig{50.0});
    const auto l = smooth_local(c, SmoothConfig{50.0});
    REQUIRE(g.size() == l.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == l[i]);
}

TEST_CASE("degenerate inputs") {
    CHECK(smooth_global({}, SmoothConfig{50.0}).empty());
    CHECK(smooth_global({420.0}, SmoothConfig{50.0}) == std::vector<double>{420.0});
    CHECK_THROWS_AS(SmoothConfig{-1.0}.validate(), ConfigError);
}
