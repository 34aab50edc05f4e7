#include "linespec/ast_admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linespec {
namespace {

void fill_toeplitz_block(CMatrix& m, const CVector& u) {
    const Eigen::Index n = u.size();
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < c; ++r) {
            m(r, c) = u(c - r);
            m(c, r) = std::conj(u(c - r));
        }
        m(c, c) = u(0).real();
    }
}

/// [T(u) x; x^* t]
CMatrix lift(const CVector& u, const CVector& x, double t) {
    const Eigen::Index n = u.size();
    CMatrix m(n + 1, n + 1);
    fill_toeplitz_block(m, u);
    m.col(n).head(n) = x;
    m.row(n).head(n) = x.adjoint();
    m(n, n) = t;
    return m;
}

CMatrix project_psd_dense(const CMatrix& h) {
    const EigenDecomposition eig = hermitian_eig(h);
    const Eigen::Index d = h.rows();
    Eigen::Index negatives = 0;
    while (negatives < d && eig.values(negatives) < 0.0) ++negatives;
    if (negatives == 0) return h;
    if (negatives == d) return CMatrix::Zero(d, d);
    CMatrix out;
    // Rebuild from whichever eigen-block is smaller.
    if (negatives <= d - negatives) {
        const auto v = eig.vectors.leftCols(negatives);
        out = h - v * eig.values.head(negatives).asDiagonal() * v.adjoint();
    } else {
        const auto v = eig.vectors.rightCols(d - negatives);
        out = v * eig.values.tail(d - negatives).asDiagonal() * v.adjoint();
    }
    return 0.5 * (out + out.adjoint());
}

/// u-update weights: the inverse of T^* T, which is diagonal.
RVector toeplitz_gram_inverse(Eigen::Index n) {
    RVector w(n);
    w(0) = 1.0 / static_cast<double>(n);
    for (Eigen::Index j = 1; j < n; ++j) w(j) = 1.0 / (2.0 * static_cast<double>(n - j));
    return w;
}

/// Norm of the adjoint of the lifting map applied to d: (d_nn, T^*(d_0), 2 d_1).
double lift_adjoint_norm(const CMatrix& d) {
    const Eigen::Index n = d.rows() - 1;
    const CVector tu = toeplitz_adjoint(CMatrix(d.topLeftCorner(n, n)));
    const double corner = d(n, n).real();
    return std::sqrt(corner * corner + tu.squaredNorm() + 4.0 * d.col(n).head(n).squaredNorm());
}

struct AdmmState {
    CVector x;
    CVector u;
    double t = 0.0;
    CMatrix Z;
    CMatrix Lambda;
    std::size_t iters = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    std::vector<double> history;
};

/// ADMM on min (weight/2)(t + u_1) [+ 0.5||x - y||^2] s.t. Z = [T(u) x; x^* t], Z >= 0.
/// With fixed_x set, x stays at its value and only (t, u, Z, Lambda) move.
AdmmState run_admm(const CVector& y, double weight, double rho, const AdmmOptions& opts,
                   bool fixed_x) {
    const Eigen::Index n = y.size();
    const Eigen::Index d = n + 1;
    const RVector w = toeplitz_gram_inverse(n);

    AdmmState s;
    s.x = fixed_x ? y : CVector::Zero(n);
    s.u = CVector::Zero(n);
    s.Z = CMatrix::Zero(d, d);
    s.Lambda = CMatrix::Zero(d, d);
    s.history.reserve(std::min<std::size_t>(opts.max_iters, 100000));

    const double sqrt_p = static_cast<double>(d);  // sqrt of (n+1)^2 real coordinates
    const double sqrt_q = std::sqrt(4.0 * static_cast<double>(n));

    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        s.t = s.Z(n, n).real() + (s.Lambda(n, n).real() - 0.5 * weight) / rho;
        if (!fixed_x)
            s.x = (y + 2.0 * rho * s.Z.col(n).head(n) + 2.0 * s.Lambda.col(n).head(n)) /
                  (2.0 * rho + 1.0);
        CVector g = toeplitz_adjoint(CMatrix(s.Z.topLeftCorner(n, n) + s.Lambda.topLeftCorner(n, n) / rho));
        g(0) -= weight / (2.0 * rho);
        s.u = w.cast<cplx>().cwiseProduct(g);
        s.u(0) = s.u(0).real();

        const CMatrix m = lift(s.u, s.x, s.t);
        CMatrix z_new = project_psd_dense(m - s.Lambda / rho);
        const CMatrix gap = z_new - m;
        s.Lambda += rho * gap;

        s.primal_residual = gap.norm();
        s.dual_residual = rho * lift_adjoint_norm(z_new - s.Z);
        s.Z = std::move(z_new);
        s.iters = it;

        const double eps_pri = sqrt_p * opts.eps_abs + opts.eps_rel * std::max(s.Z.norm(), m.norm());
        const double eps_dual = sqrt_q * opts.eps_abs + opts.eps_rel * lift_adjoint_norm(s.Lambda);
        s.history.push_back(std::max(s.primal_residual / eps_pri, s.dual_residual / eps_dual));
        if (s.primal_residual <= eps_pri && s.dual_residual <= eps_dual) {
            s.converged = true;
            break;
        }
    }
    return s;
}

double effective_penalty(const AdmmOptions& opts, double weight, double data_norm) {
    if (opts.scaling == PenaltyScaling::kAbsolute || data_norm == 0.0) return opts.rho;
    return opts.rho * weight / data_norm;
}

}  // namespace

AdmmOptions AdmmOptions::fixed_penalty(double rho) {
    AdmmOptions o;
    o.rho = rho;
    o.scaling = PenaltyScaling::kAbsolute;
    return o;
}

void AdmmOptions::validate() const {
    if (!(rho > 0.0) || max_iters == 0 || !(eps_abs > 0.0) || !(eps_rel > 0.0))
        throw std::invalid_argument("AdmmOptions: rho, max_iters, eps_abs, eps_rel must be positive");
}

EigenDecomposition hermitian_eig(const CMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: not square");
    if (!h.allFinite()) throw std::invalid_argument("hermitian_eig: non-finite entry");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: QR iteration did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) { return hermitian_eig(h.dense()); }

HermitianMatrix psd_project(const HermitianMatrix& h) {
    return HermitianMatrix::from_upper(project_psd_dense(h.dense()));
}

double sdp_objective(const CVector& x, const CVector& u, double t, const CVector& y, double tau) {
    if (x.size() != y.size() || u.size() != y.size())
        throw std::invalid_argument("sdp_objective: dimension mismatch");
    return 0.5 * (x - y).squaredNorm() + 0.5 * tau * (t + u(0).real());
}

AstSolution solve_ast(const ComplexSignal& y, double tau, const AdmmOptions& opts) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("solve_ast: tau must be positive");
    if (y.size() < 2) throw std::invalid_argument("solve_ast: need n >= 2");
    opts.validate();

    const double rho = effective_penalty(opts, tau, y.norm());
    AdmmState s = run_admm(y.samples(), tau, rho, opts, /*fixed_x=*/false);
    ComplexSignal x_hat(s.x);
    AstSolution sol{
        .x_hat = x_hat,
        .z_hat = y - x_hat,
        .u = s.u,
        .t = s.t,
        .Z = HermitianMatrix::from_upper(s.Z),
        .Lambda = HermitianMatrix::from_upper(s.Lambda),
        .tau = tau,
        .iters = s.iters,
        .rho = rho,
        .primal_residual = s.primal_residual,
        .dual_residual = s.dual_residual,
        .objective = sdp_objective(s.x, s.u, s.t, y.samples(), tau),
        .converged = s.converged,
        .residual_history = std::move(s.history),
    };
    return sol;
}

AtomicNormSolution atomic_norm_sdp_solve(const ComplexSignal& x, const AdmmOptions& opts) {
    opts.validate();
    const double n = static_cast<double>(x.size());
    const double scale = x.norm() / std::sqrt(n);
    if (scale == 0.0) return {.value = 0.0, .t = 0.0, .u = CVector::Zero(x.samples().size()), .iters = 0, .converged = true};
    if (x.size() == 1) return {.value = std::abs(x[0]), .t = std::abs(x[0]), .u = CVector::Constant(1, std::abs(x[0])), .iters = 0, .converged = true};

    const CVector normalized = x.samples() / scale;
    const double rho = effective_penalty(opts, 1.0, normalized.norm());
    const AdmmState s = run_admm(normalized, 1.0, rho, opts, /*fixed_x=*/true);
    return {
        .value = scale * 0.5 * (s.t + s.u(0).real()),
        .t = scale * s.t,
        .u = scale * s.u,
        .iters = s.iters,
        .converged = s.converged,
    };
}

double atomic_norm_sdp(const ComplexSignal& x, const AdmmOptions& opts) {
    return atomic_norm_sdp_solve(x, opts).value;
}

}  // namespace linespec
