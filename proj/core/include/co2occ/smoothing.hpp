#ifndef CO2OCC_SMOOTHING_HPP
#define CO2OCC_SMOOTHING_HPP

#include <vector>

namespace co2occ {

struct SmoothConfig {
    double lambda = 50.0;

    void validate() const;
};

/// sub/sup have length N-1, diag and rhs length N.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;
};

/// Thomas algorithm, O(N). Throws NumericError on a zero pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// Builds (I + lambda * D) c_s = c with D the first-difference Laplacian:
/// boundary diagonal 1+lambda, interior 1+2*lambda, off-diagonals -lambda.
TridiagonalSystem build_smoothing_system(const std::vector<double>& c, double lambda);

/// c_s = (I + lambda*D)^-1 c over the whole sequence. Length-1 input is
/// returned unchanged.
std::vector<double> smooth_global(const std::vector<double>& c, const SmoothConfig& config);

/// Same solve restricted to the causal prefix; equals smooth_global when the
/// prefix is the full sequence.
std::vector<double> smooth_local(const std::vector<double>& c_prefix, const SmoothConfig& config);

} // namespace co2occ

#endif
