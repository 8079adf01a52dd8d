#include "co2occ/smoothing.hpp"

#include <cmath>
#include <string>

#include "co2occ/errors.hpp"

namespace co2occ {

void SmoothConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ConfigError("smoothing lambda must be finite and >= 0");
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.diag.size();
    if (n == 0) throw ConfigError("solve_tridiagonal: empty system");
    if (sys.rhs.size() != n || sys.sub.size() + 1 != n || sys.sup.size() + 1 != n)
        throw ConfigError("solve_tridiagonal: inconsistent band lengths");

    std::vector<double> cp(n - 1 > 0 ? n - 1 : 0);
    std::vector<double> dp(n);
    double pivot = sys.diag[0];
    if (pivot == 0.0) throw NumericError("solve_tridiagonal: zero pivot at row 0");
    if (n > 1) cp[0] = sys.sup[0] / pivot;
    dp[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.sub[i - 1] * cp[i - 1];
        if (pivot == 0.0)
            throw NumericError("solve_tridiagonal: zero pivot at row " + std::to_string(i));
        if (i + 1 < n) cp[i] = sys.sup[i] / pivot;
        dp[i] = (sys.rhs[i] - sys.sub[i - 1] * dp[i - 1]) / pivot;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

TridiagonalSystem build_smoothing_system(const std::vector<double>& c, double lambda) {
    const std::size_t n = c.size();
    if (n < 2) throw ConfigError("build_smoothing_system: need N >= 2");
    TridiagonalSystem sys;
    sys.diag.assign(n, 1.0 + 2.0 * lambda);
    sys.diag.front() = 1.0 + lambda;
    sys.diag.back() = 1.0 + lambda;
    sys.sub.assign(n - 1, -lambda);
    sys.sup.assign(n - 1, -lambda);
    sys.rhs = c;
    return sys;
}

std::vector<double> smooth_global(const std::vector<double>& c, const SmoothConfig& config) {
    config.validate();
    if (c.size() <= 1) return c;
    return solve_tridiagonal(build_smoothing_system(c, config.lambda));
}

std::vector<double> smooth_local(const std::vector<double>& c_prefix, const SmoothConfig& config) {
    return smooth_global(c_prefix, config);
}

} // namespace co2occ
