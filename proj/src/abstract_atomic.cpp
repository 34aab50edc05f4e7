#include "linespec/abstract_atomic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linespec {
namespace {

void require_nonnegative_tau(double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
}

template <typename Scalar>
Scalar shrink(Scalar v, double tau) {
    const double mag = std::abs(v);
    if (mag <= tau) return Scalar(0);
    return v * (1.0 - tau / mag);
}

}  // namespace

CVector soft_threshold(const CVector& y, double tau) {
    require_nonnegative_tau(tau);
    return y.unaryExpr([tau](cplx v) { return shrink(v, tau); });
}

RVector soft_threshold(const RVector& y, double tau) {
    require_nonnegative_tau(tau);
    return y.unaryExpr([tau](double v) { return shrink(v, tau); });
}

OptimalityReport check_optimality(const CVector& y, const CVector& x_hat, double tau,
                                  const DualNormEvaluator& dual_norm, double atomic_norm_x_hat,
                                  double tol) {
    if (y.size() != x_hat.size()) throw std::invalid_argument("check_optimality: length mismatch");
    require_nonnegative_tau(tau);
    const CVector residual = y - x_hat;
    const NormBracket bracket = dual_norm(residual);

    OptimalityReport report;
    report.tau = tau;
    report.tolerance = tol;
    report.dual_norm_residual = bracket.lower;
    report.dual_norm_residual_upper = bracket.upper;
    report.alignment_gap = std::abs(real_inner(residual, x_hat) - tau * atomic_norm_x_hat);
    report.passed = report.dual_norm_residual <= tau * (1.0 + tol) &&
                    report.alignment_gap <= tol * std::max(1.0, tau * atomic_norm_x_hat);
    return report;
}

OptimalityReport check_optimality_l1(const CVector& y, const CVector& x_hat, double tau,
                                     double tol) {
    const DualNormEvaluator sup_norm = [](const CVector& v) {
        const double m = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
        return NormBracket(m, m);
    };
    return check_optimality(y, x_hat, tau, sup_norm, x_hat.cwiseAbs().sum(), tol);
}

DualNormEvaluator line_spectral_dual_norm(std::size_t grid_size) {
    return [grid_size](const CVector& v) { return dual_atomic_norm(v, grid_size); };
}

bool cone_membership(const CVector& x_star, const CVector& z, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (x_star.size() != z.size()) throw std::invalid_argument("cone_membership: length mismatch");
    const double lhs = (x_star + z).cwiseAbs().sum();
    const double rhs = x_star.cwiseAbs().sum() + gamma * z.cwiseAbs().sum();
    return lhs <= rhs;
}

double sparse_phi_lower_bound(std::size_t k, double gamma) {
    if (k < 1) throw std::invalid_argument("sparse_phi_lower_bound: k must be >= 1");
    return (1.0 - gamma) / (2.0 * std::sqrt(static_cast<double>(k)));
}

double slow_rate_bound(double tau, double atomic_norm_x, std::size_t n) {
    if (n < 1 || tau < 0.0 || atomic_norm_x < 0.0)
        throw std::invalid_argument("slow_rate_bound: arguments must be nonnegative, n >= 1");
    return tau * atomic_norm_x / static_cast<double>(n);
}

double slow_rate_bound_per_trial(double tau, double atomic_norm_x, std::size_t n) {
    return 2.0 * slow_rate_bound(tau, atomic_norm_x, n);
}

}  // namespace linespec
