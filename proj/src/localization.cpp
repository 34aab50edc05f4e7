#include "linespec/localization.hpp"

#include "linespec/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace linespec {
namespace {

double wrap_unit(double f) {
    f -= std::floor(f);
    return f >= 1.0 ? 0.0 : f;
}

/// Maximizes |p| on [lo, hi] by golden-section search.
std::pair<double, double> golden_section_max(const DualPolynomial& p, double lo, double hi,
                                             int iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::abs(p.evaluate(c));
    double fd = std::abs(p.evaluate(d));
    for (int i = 0; i < iterations; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = std::abs(p.evaluate(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = std::abs(p.evaluate(d));
        }
    }
    return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

DualPolynomial::DualPolynomial(CVector c, double t) : coeffs(std::move(c)), tau(t) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("DualPolynomial: tau must be positive");
    if (coeffs.size() == 0 || !coeffs.allFinite())
        throw std::invalid_argument("DualPolynomial: coefficients must be finite and nonempty");
}

cplx DualPolynomial::evaluate(double f) const {
    const cplx z = std::polar(1.0, -kTwoPi * f);
    cplx acc = coeffs(coeffs.size() - 1);
    for (Eigen::Index l = coeffs.size() - 2; l >= 0; --l) acc = acc * z + coeffs(l);
    return acc;
}

double circular_distance(double a, double b) {
    const double d = std::abs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

RVector eval_dual_polynomial(const DualPolynomial& p, std::size_t grid_size) {
    if (grid_size < 4 * static_cast<std::size_t>(p.coeffs.size()))
        throw std::invalid_argument("eval_dual_polynomial: grid must be at least 4n");
    return fft::forward_padded(p.coeffs, grid_size).cwiseAbs();
}

LocalizationResult localize_frequencies(const DualPolynomial& p, double rel_threshold,
                                        std::size_t grid_size) {
    const RVector mag = eval_dual_polynomial(p, grid_size);
    const auto big_n = static_cast<Eigen::Index>(grid_size);
    const double n = static_cast<double>(p.coeffs.size());
    const double threshold = rel_threshold * p.tau;
    const double cell = 1.0 / static_cast<double>(grid_size);

    struct Peak {
        double f;
        double value;
    };
    std::vector<Peak> peaks;
    for (Eigen::Index m = 0; m < big_n; ++m) {
        const double v = mag(m);
        if (v <= threshold) continue;
        const double left = mag((m + big_n - 1) % big_n);
        const double right = mag((m + 1) % big_n);
        if (!(v > left && v >= right)) continue;
        const double f0 = static_cast<double>(m) * cell;
        auto [f, value] = golden_section_max(p, f0 - cell, f0 + cell, 20);
        if (value < v) {
            f = f0;
            value = v;
        }
        peaks.push_back({wrap_unit(f), value});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.f < b.f; });

    LocalizationResult result;
    result.grid_size_used = grid_size;
    const double merge_radius = 1.0 / (4.0 * n);
    std::vector<Peak> kept;
    for (const Peak& peak : peaks) {
        if (!kept.empty() && circular_distance(kept.back().f, peak.f) < merge_radius) {
            result.merged_peaks = true;
            if (peak.value > kept.back().value) kept.back() = peak;
        } else {
            kept.push_back(peak);
        }
    }
    if (kept.size() > 1 && circular_distance(kept.front().f, kept.back().f) < merge_radius) {
        result.merged_peaks = true;
        if (kept.back().value > kept.front().value) kept.front() = kept.back();
        kept.pop_back();
        std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.f < b.f; });
    }
    for (const Peak& peak : kept) {
        result.frequencies.push_back(peak.f);
        result.magnitudes_at_peaks.push_back(peak.value);
    }
    return result;
}

CMatrix fourier_vandermonde(std::size_t n, const std::vector<double>& freqs) {
    CMatrix u(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(freqs.size()));
    for (std::size_t l = 0; l < freqs.size(); ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            double turns = static_cast<double>(j) * freqs[l];
            turns -= std::floor(turns);
            u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = std::polar(1.0, kTwoPi * turns);
        }
    }
    return u;
}

DebiasResult debias(const ComplexSignal& y, const std::vector<double>& freqs) {
    const std::size_t n = y.size();
    if (freqs.size() > n) throw std::invalid_argument("debias: more frequencies than samples");
    for (double f : freqs)
        if (!std::isfinite(f)) throw std::invalid_argument("debias: non-finite frequency");
    if (freqs.empty()) return {{}, ComplexSignal::zeros(n), false};

    const CMatrix u = fourier_vandermonde(n, freqs);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(u);
    const CVector alpha = cod.solve(y.samples());
    DebiasResult out{
        .amplitudes = std::vector<cplx>(alpha.data(), alpha.data() + alpha.size()),
        .x_hat = ComplexSignal(u * alpha),
        .rank_deficient = cod.rank() < static_cast<Eigen::Index>(freqs.size()),
    };
    return out;
}

}  // namespace linespec
