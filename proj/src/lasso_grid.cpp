#include "linespec/lasso_grid.hpp"

#include "linespec/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linespec {
namespace {

CVector complex_soft_threshold(const CVector& v, double thr) {
    CVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        out(i) = mag > thr ? v(i) * ((mag - thr) / mag) : cplx{};
    }
    return out;
}

double objective_from(const CVector& c, const CVector& phic, const CVector& y, double tau) {
    return 0.5 * (phic - y).squaredNorm() + tau * c.cwiseAbs().sum();
}

}  // namespace

void GridLassoOptions::validate(std::size_t n) const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("GridLassoOptions: tau must be positive");
    if (!(tol > 0.0) || max_iters == 0) throw std::invalid_argument("GridLassoOptions: tol and max_iters must be positive");
    const double nd = static_cast<double>(n);
    if (grid_size < 4 * n || static_cast<double>(grid_size) <= kTwoPi * nd)
        throw std::invalid_argument("GridLassoOptions: grid must satisfy N >= 4n and N > 2 pi n");
    if (initial.size() != 0 && (static_cast<std::size_t>(initial.size()) != grid_size || !initial.allFinite()))
        throw std::invalid_argument("GridLassoOptions: warm start must be finite with length N");
}

ComplexSignal phi_apply(const CVector& c, std::size_t n) {
    if (static_cast<std::size_t>(c.size()) < n || n == 0)
        throw std::invalid_argument("phi_apply: need 1 <= n <= N");
    return ComplexSignal(fft::backward(c).head(static_cast<Eigen::Index>(n)));
}

CVector phi_adjoint(const ComplexSignal& z, std::size_t grid_size) {
    if (grid_size < z.size()) throw std::invalid_argument("phi_adjoint: need N >= n");
    return fft::forward_padded(z.samples(), grid_size);
}

double lasso_objective(const CVector& c, const ComplexSignal& y, double tau) {
    return objective_from(c, phi_apply(c, y.size()).samples(), y.samples(), tau);
}

GridSolution solve_lasso(const ComplexSignal& y, const GridLassoOptions& opts) {
    const std::size_t n = y.size();
    opts.validate(n);
    const auto big_n = static_cast<Eigen::Index>(opts.grid_size);
    const double step = 1.0 / static_cast<double>(opts.grid_size);
    const double thr = opts.tau * step;
    const CVector& yv = y.samples();

    auto prox_step = [&](const CVector& v, const CVector& phiv) {
        const CVector grad = phi_adjoint(ComplexSignal(CVector(phiv - yv)), opts.grid_size);
        return complex_soft_threshold(v - step * grad, thr);
    };
    auto apply = [&](const CVector& c) { return CVector(phi_apply(c, n).samples()); };

    CVector c = opts.initial.size() ? opts.initial : CVector::Zero(big_n);
    CVector phic = apply(c);
    CVector c_prev = c, phic_prev = phic;
    double f = objective_from(c, phic, yv, opts.tau);
    double t = 1.0;

    GridSolution sol{.c_hat = {}, .x_hat = ComplexSignal::zeros(n), .support_clusters = {},
                     .objective = 0.0, .iters = 0, .converged = false, .objective_history = {}};
    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        CVector cand = prox_step(c + beta * (c - c_prev), phic + beta * (phic - phic_prev));
        CVector phicand = apply(cand);
        double f_cand = objective_from(cand, phicand, yv, opts.tau);

        bool restarted = false;
        if (f_cand > f && beta != 0.0) {
            restarted = true;
            cand = prox_step(c, phic);
            phicand = apply(cand);
            f_cand = objective_from(cand, phicand, yv, opts.tau);
            t = 1.0;
        } else {
            t = t_next;
        }

        const double decrease = f - f_cand;
        c_prev = std::move(c);
        phic_prev = std::move(phic);
        c = std::move(cand);
        phic = std::move(phicand);
        f = f_cand;
        sol.iters = it;
        sol.objective_history.push_back(f);
        if (!restarted && decrease <= opts.tol * (f + decrease)) {
            sol.converged = true;
            break;
        }
    }

    sol.x_hat = phi_apply(c, n);
    sol.objective = objective_from(c, sol.x_hat.samples(), yv, opts.tau);
    sol.support_clusters = support_clusters(c, default_cluster_gap(opts.grid_size, n));
    sol.c_hat = std::move(c);
    return sol;
}

std::size_t default_cluster_gap(std::size_t grid_size, std::size_t n) {
    if (n == 0) throw std::invalid_argument("default_cluster_gap: n must be positive");
    return std::max<std::size_t>(1, grid_size / (4 * n));
}

std::vector<IndexRange> support_clusters(const CVector& c, std::size_t min_gap) {
    const auto big_n = static_cast<std::size_t>(c.size());
    const double cutoff = 1e-6 * c.cwiseAbs().maxCoeff();
    std::vector<std::size_t> support;
    if (big_n == 0 || !(cutoff > 0.0)) return {};
    for (std::size_t m = 0; m < big_n; ++m)
        if (std::abs(c(static_cast<Eigen::Index>(m))) > cutoff) support.push_back(m);

    // Zero indices between consecutive support points, the last one wrapping to the first.
    const std::size_t k = support.size();
    auto gap_after = [&](std::size_t i) {
        return i + 1 < k ? support[i + 1] - support[i] - 1 : big_n - support[k - 1] + support[0] - 1;
    };
    std::size_t start = 0;
    bool any_break = false;
    for (std::size_t i = 0; i < k; ++i) {
        if (gap_after(i) >= min_gap) {
            start = (i + 1) % k;
            any_break = true;
            break;
        }
    }

    std::vector<IndexRange> clusters;
    auto magnitude = [&](std::size_t m) { return std::abs(c(static_cast<Eigen::Index>(m))); };
    IndexRange cur{support[start], support[start], support[start]};
    for (std::size_t step = 1; step <= k; ++step) {
        const std::size_t prev = (start + step - 1) % k;
        if (step == k || (any_break && gap_after(prev) >= min_gap)) {
            clusters.push_back(cur);
            if (step == k) break;
            const std::size_t m = support[(start + step) % k];
            cur = {m, m, m};
            continue;
        }
        const std::size_t m = support[(start + step) % k];
        cur.last = m;
        if (magnitude(m) > magnitude(cur.peak)) cur.peak = m;
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const IndexRange& a, const IndexRange& b) { return a.first < b.first; });
    return clusters;
}

std::vector<double> extract_cluster_peaks(const CVector& c, std::size_t min_gap) {
    std::vector<double> freqs;
    for (const IndexRange& r : support_clusters(c, min_gap))
        freqs.push_back(static_cast<double>(r.peak) / static_cast<double>(c.size()));
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

}  // namespace linespec
