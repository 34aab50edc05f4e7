#pragma once

#include "linespec/core.hpp"

#include <cstddef>
#include <vector>

namespace linespec {

/// How AdmmOptions::rho is read. The iteration is equivariant under joint scaling of
/// (y, tau), so the well-conditioned penalty depends on tau / ||y|| rather than on an
/// absolute constant: kRelative uses rho * tau / ||y||_2, kAbsolute uses rho as given.
enum class PenaltyScaling { kRelative, kAbsolute };

struct AdmmOptions {
    double rho = 0.05;
    PenaltyScaling scaling = PenaltyScaling::kRelative;
    std::size_t max_iters = 10000;
    double eps_abs = 1e-7;
    double eps_rel = 1e-7;

    void validate() const;
    /// Absolute penalty, independent of tau and the data scale.
    static AdmmOptions fixed_penalty(double rho = 2.0);
};

/// Result of atomic norm soft thresholding solved through its semidefinite form.
struct AstSolution {
    ComplexSignal x_hat;
    ComplexSignal z_hat;  // y - x_hat, the dual solution
    CVector u;            // first row of the Toeplitz block
    double t = 0.0;
    HermitianMatrix Z;       // PSD consensus variable, dimension n + 1
    HermitianMatrix Lambda;  // multiplier, dimension n + 1
    double tau = 0.0;
    std::size_t iters = 0;
    double rho = 0.0;  // effective penalty used
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    bool converged = false;
    std::vector<double> residual_history;  // max(r/eps_pri, s/eps_dual) per iteration

    /// 0.5 (t + u_1): the SDP's value of ||x_hat||_A at the returned iterate.
    double atomic_norm_estimate() const { return 0.5 * (t + u(0).real()); }
};

struct EigenDecomposition {
    RVector values;  // ascending
    CMatrix vectors;  // unitary, columns match values
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h);
EigenDecomposition hermitian_eig(const CMatrix& h);

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues clamped to zero.
HermitianMatrix psd_project(const HermitianMatrix& h);

/// 0.5 ||x - y||^2 + (tau / 2)(t + u_1).
double sdp_objective(const CVector& x, const CVector& u, double t, const CVector& y, double tau);

/// Atomic norm soft thresholding for line spectra by ADMM on
///   min 0.5 ||x - y||^2 + (tau/2)(t + u_1)  s.t.  [T(u) x; x^* t] >= 0.
/// Starts from all-zero variables. Hitting max_iters returns the last iterate with
/// converged = false.
AstSolution solve_ast(const ComplexSignal& y, double tau, const AdmmOptions& opts = {});

struct AtomicNormSolution {
    double value = 0.0;
    double t = 0.0;
    CVector u;
    std::size_t iters = 0;
    bool converged = false;
};

/// ||x||_A = min 0.5 (t + u_1) s.t. [T(u) x; x^* t] >= 0, by the same ADMM splitting with x
/// held fixed. The problem is solved on x rescaled to unit RMS and the value scaled back.
AtomicNormSolution atomic_norm_sdp_solve(const ComplexSignal& x, const AdmmOptions& opts = {});
double atomic_norm_sdp(const ComplexSignal& x, const AdmmOptions& opts = {});

}  // namespace linespec
