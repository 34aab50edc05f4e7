#pragma once

#include "linespec/core.hpp"

#include <cstddef>
#include <vector>

namespace linespec {

/// Settings for the classical estimators, all of which are given the model order k.
/// Zero-valued sizes mean "use the default for this n".
struct BaselineConfig {
    std::size_t k = 1;
    std::size_t pencil_parameter = 0;    // L, default floor(n/3)
    std::size_t cadzow_iters = 50;
    std::size_t music_subspace_dim = 0;  // m + 1 for prediction order m, default floor(n/3) + 1

    std::size_t pencil_L(std::size_t n) const;
    std::size_t music_order(std::size_t n) const;  // m
    /// Checks 1 <= k < n, k < L < n - k and k < m + 1 <= n.
    void validate(std::size_t n) const;
};

std::size_t default_prediction_order(std::size_t n);

/// R = H^* H / (n - m) for the (n - m) x (m + 1) forward data matrix H with rows
/// [y_j, ..., y_{j+m}].
CMatrix forward_autocorrelation(const ComplexSignal& y, std::size_t m);

/// Mean of the smallest ceil((m + 1) / 4) eigenvalues of forward_autocorrelation(y, m).
double estimate_noise_variance(const ComplexSignal& y, std::size_t m);
double estimate_noise_variance(const ComplexSignal& y);

/// Roots of sum_i coeffs_i z^i by companion-matrix eigenvalues. Leading coefficients that
/// vanish relative to the largest are dropped first.
std::vector<cplx> polynomial_roots(const CVector& coeffs);

/// Root-MUSIC on the forward autocorrelation with prediction order m. Returns k sorted
/// frequencies in [0, 1).
std::vector<double> music(const ComplexSignal& y, std::size_t k, std::size_t m);
std::vector<double> music(const ComplexSignal& y, std::size_t k);

/// 1 / sum over the noise eigenvectors e of |sum_p e_p e^{i2 pi p f}|^2.
double music_pseudospectrum(const ComplexSignal& y, std::size_t k, std::size_t m, double f);

/// Matrix pencil on the (n - L) x (L + 1) Hankel matrix truncated to rank k.
std::vector<double> matrix_pencil(const ComplexSignal& y, std::size_t k, std::size_t L);
std::vector<double> matrix_pencil(const ComplexSignal& y, std::size_t k);

/// Hankel lift H_ij = y_{i+j} with floor(n/2) + 1 rows, and its inverse by anti-diagonal averaging.
CMatrix hankel_lift(const ComplexSignal& y);
ComplexSignal hankel_average(const CMatrix& h);

/// Cadzow denoising: alternate rank-k truncation and Hankel averaging for iters rounds.
ComplexSignal cadzow(const ComplexSignal& y, std::size_t k, std::size_t iters = 50);

}  // namespace linespec
