#pragma once

#include "linespec/core.hpp"

#include <cstddef>
#include <vector>

namespace linespec {

/// Z(f) = sum_l coeffs_l e^{-i2 pi l f}; for an AST solve, coeffs = z_hat and tau the regularizer.
struct DualPolynomial {
    DualPolynomial(CVector coeffs, double tau);

    CVector coeffs;
    double tau;

    cplx evaluate(double f) const;
};

struct LocalizationResult {
    std::vector<double> frequencies;  // sorted, in [0, 1)
    std::vector<double> magnitudes_at_peaks;
    std::size_t grid_size_used = 0;
    bool merged_peaks = false;  // some peaks closer than 1/(4n) were merged
};

inline constexpr std::size_t kDefaultLocalizationGrid = std::size_t{1} << 16;
inline constexpr double kDefaultPeakThreshold = 0.999;

/// |Z(m/N)| for m = 0..N-1. Requires N >= 4n.
RVector eval_dual_polynomial(const DualPolynomial& p, std::size_t grid_size);

/// Strict local maxima of |Z| on the grid above rel_threshold * tau, refined by golden-section
/// search on [f - 1/N, f + 1/N]. Peaks closer than 1/(4n) are merged, keeping the larger.
LocalizationResult localize_frequencies(const DualPolynomial& p,
                                        double rel_threshold = kDefaultPeakThreshold,
                                        std::size_t grid_size = kDefaultLocalizationGrid);

struct DebiasResult {
    std::vector<cplx> amplitudes;
    ComplexSignal x_hat;
    bool rank_deficient = false;
};

/// Least-squares refit of amplitudes on fixed frequencies: min ||U a - y|| with
/// U_jl = e^{i2 pi j f_l}. Rank-deficient U falls back to the minimum-norm solution.
DebiasResult debias(const ComplexSignal& y, const std::vector<double>& freqs);

/// n x k Vandermonde matrix U_jl = e^{i2 pi j f_l}.
CMatrix fourier_vandermonde(std::size_t n, const std::vector<double>& freqs);

/// Circular distance on [0, 1).
double circular_distance(double a, double b);

}  // namespace linespec
