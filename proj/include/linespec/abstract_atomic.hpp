#pragma once

#include "linespec/core.hpp"

#include <functional>

namespace linespec {

/// Outcome of checking the two optimality conditions of atomic soft thresholding:
/// (i) ||y - x||*_A <= tau and (ii) <y - x, x> = tau ||x||_A.
struct OptimalityReport {
    double dual_norm_residual = 0.0;        // lower end of the dual-norm bracket of y - x
    double dual_norm_residual_upper = 0.0;  // upper end; equal to the lower end for exact evaluators
    double alignment_gap = 0.0;             // |<y - x, x> - tau ||x||_A|
    double tau = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

using DualNormEvaluator = std::function<NormBracket(const CVector&)>;

inline constexpr double kDefaultOptimalityTol = 1e-6;

/// Entrywise complex shrinkage x_i = y_i max(1 - tau/|y_i|, 0): the prox of tau ||.||_1.
CVector soft_threshold(const CVector& y, double tau);
RVector soft_threshold(const RVector& y, double tau);

/// Evaluates both optimality conditions with a supplied dual-norm evaluator and the
/// atomic norm of x_hat. passed iff dual_norm_residual <= tau (1 + tol) and
/// alignment_gap <= tol max(1, tau ||x_hat||_A).
OptimalityReport check_optimality(const CVector& y, const CVector& x_hat, double tau,
                                  const DualNormEvaluator& dual_norm, double atomic_norm_x_hat,
                                  double tol = kDefaultOptimalityTol);

/// The l1 instance: dual norm is the sup norm, atomic norm the l1 norm.
OptimalityReport check_optimality_l1(const CVector& y, const CVector& x_hat, double tau,
                                     double tol = kDefaultOptimalityTol);

/// Evaluator for line-spectral atoms backed by dual_atomic_norm on the given grid.
DualNormEvaluator line_spectral_dual_norm(std::size_t grid_size);

/// Generator test for the widened tangent cone of the l1 ball:
/// ||x* + z||_1 <= ||x*||_1 + gamma ||z||_1.
bool cone_membership(const CVector& x_star, const CVector& z, double gamma);

/// (1 - gamma) / (2 sqrt(k)): lower bound on ||z||_2 / ||z||_1 over the l1 cone at a k-sparse point.
double sparse_phi_lower_bound(std::size_t k, double gamma);

/// tau ||x||_A / n, the expected per-element MSE bound.
double slow_rate_bound(double tau, double atomic_norm_x, std::size_t n);
/// 2 tau ||x||_A / n, the per-realization bound valid whenever tau exceeds ||w||*_A.
double slow_rate_bound_per_trial(double tau, double atomic_norm_x, std::size_t n);

}  // namespace linespec
