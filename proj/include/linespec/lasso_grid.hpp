#pragma once

#include "linespec/core.hpp"

#include <cstddef>
#include <vector>

namespace linespec {

struct GridLassoOptions {
    std::size_t grid_size = std::size_t{1} << 15;
    double tau = 0.0;
    std::size_t max_iters = 5000;
    double tol = 1e-4;  // relative objective decrease
    CVector initial;    // warm start of length N; empty means zero

    /// Checks tau > 0, tol > 0, max_iters > 0, N >= 4n, N > 2 pi n and the warm start length.
    void validate(std::size_t n) const;
};

/// Inclusive run of grid indices [first, last]; first > last means it wraps past N - 1.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t peak = 0;  // index of max |c| inside the range
};

struct GridSolution {
    CVector c_hat;
    ComplexSignal x_hat;  // phi_apply(c_hat, n)
    std::vector<IndexRange> support_clusters;
    double objective = 0.0;
    std::size_t iters = 0;
    bool converged = false;
    std::vector<double> objective_history;  // accepted objective per iteration
};

/// x_j = sum_m c_m e^{i2 pi j m / N}, j < n.
ComplexSignal phi_apply(const CVector& c, std::size_t n);

/// (Phi^* z)_m = sum_j z_j e^{-i2 pi j m / N}.
CVector phi_adjoint(const ComplexSignal& z, std::size_t grid_size);

/// 0.5 ||Phi c - y||^2 + tau ||c||_1.
double lasso_objective(const CVector& c, const ComplexSignal& y, double tau);

/// Accelerated proximal gradient with step 1/N and function-value restart; a restart falls
/// back to a plain proximal step, so accepted objectives never increase.
GridSolution solve_lasso(const ComplexSignal& y, const GridLassoOptions& opts);

/// N / (4n), at least 1.
std::size_t default_cluster_gap(std::size_t grid_size, std::size_t n);

/// Clusters of |c_m| > 1e-6 max|c|, split wherever at least min_gap zero indices intervene
/// (circularly). Ordered by first index.
std::vector<IndexRange> support_clusters(const CVector& c, std::size_t min_gap);

/// peak / N for each support cluster, sorted.
std::vector<double> extract_cluster_peaks(const CVector& c, std::size_t min_gap);

}  // namespace linespec
