#include "linespec/baselines.hpp"

#include "linespec/ast_admm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linespec {
namespace {

double angle_to_frequency(cplx w) {
    double f = std::arg(w) / kTwoPi;
    f -= std::floor(f);
    return f >= 1.0 ? 0.0 : f;
}

CMatrix truncated_svd_left(const CMatrix& h, std::size_t k) {
    Eigen::BDCSVD<CMatrix> svd(h, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(static_cast<Eigen::Index>(k));
}

CMatrix hankel(const CVector& y, Eigen::Index rows) {
    const Eigen::Index cols = y.size() - rows + 1;
    CMatrix h(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) h.col(j) = y.segment(j, rows);
    return h;
}

}  // namespace

std::size_t default_prediction_order(std::size_t n) { return n / 3; }

std::size_t BaselineConfig::pencil_L(std::size_t n) const {
    return pencil_parameter != 0 ? pencil_parameter : n / 3;
}

std::size_t BaselineConfig::music_order(std::size_t n) const {
    return music_subspace_dim != 0 ? music_subspace_dim - 1 : default_prediction_order(n);
}

void BaselineConfig::validate(std::size_t n) const {
    if (k < 1 || k >= n) throw std::invalid_argument("BaselineConfig: need 1 <= k < n");
    const std::size_t L = pencil_L(n);
    if (!(k < L && L + k < n)) throw std::invalid_argument("BaselineConfig: need k < L < n - k");
    const std::size_t m = music_order(n);
    if (!(k < m + 1 && m + 1 <= n)) throw std::invalid_argument("BaselineConfig: need k < m + 1 <= n");
    if (cadzow_iters == 0) throw std::invalid_argument("BaselineConfig: cadzow_iters must be positive");
}

CMatrix forward_autocorrelation(const ComplexSignal& y, std::size_t m) {
    const std::size_t n = y.size();
    if (m < 1 || m >= n) throw std::invalid_argument("forward_autocorrelation: need 1 <= m < n");
    const auto rows = static_cast<Eigen::Index>(n - m);
    const auto cols = static_cast<Eigen::Index>(m + 1);
    CMatrix h(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) h.row(j) = y.samples().segment(j, cols).transpose();
    CMatrix r = h.adjoint() * h / static_cast<double>(rows);
    return 0.5 * (r + r.adjoint());
}

double estimate_noise_variance(const ComplexSignal& y, std::size_t m) {
    if (m < 2 || m >= y.size()) throw std::invalid_argument("estimate_noise_variance: need 2 <= m < n");
    const RVector values = hermitian_eig(forward_autocorrelation(y, m)).values;
    const auto count = static_cast<Eigen::Index>((m + 1 + 3) / 4);
    return std::max(0.0, values.head(count).mean());
}

double estimate_noise_variance(const ComplexSignal& y) {
    return estimate_noise_variance(y, default_prediction_order(y.size()));
}

std::vector<cplx> polynomial_roots(const CVector& coeffs) {
    const double scale = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0;
    if (!(scale > 0.0)) throw std::invalid_argument("polynomial_roots: zero polynomial");
    Eigen::Index degree = coeffs.size() - 1;
    while (degree > 0 && std::abs(coeffs(degree)) <= 1e-14 * scale) --degree;
    if (degree == 0) return {};
    CMatrix companion = CMatrix::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs(i) / coeffs(degree);
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("polynomial_roots: eigensolver failed");
    const CVector& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

namespace {

CMatrix noise_projector(const ComplexSignal& y, std::size_t k, std::size_t m) {
    if (k == 0 || k >= m + 1 || m >= y.size())
        throw std::invalid_argument("music: need 1 <= k < m + 1 <= n");
    const EigenDecomposition eig = hermitian_eig(forward_autocorrelation(y, m));
    const auto noise_dim = static_cast<Eigen::Index>(m + 1 - k);
    const CMatrix en = eig.vectors.leftCols(noise_dim);
    return en * en.adjoint();
}

}  // namespace

std::vector<double> music(const ComplexSignal& y, std::size_t k, std::size_t m) {
    const CMatrix c = noise_projector(y, k, m);
    const Eigen::Index dim = c.rows();
    // Q(w) = sum_{p,q} C_pq w^{p-q}; coefficient of w^{d + dim - 1} is the d-th diagonal sum.
    CVector coeffs = CVector::Zero(2 * dim - 1);
    for (Eigen::Index p = 0; p < dim; ++p)
        for (Eigen::Index q = 0; q < dim; ++q) coeffs(p - q + dim - 1) += c(p, q);
    std::vector<cplx> roots = polynomial_roots(coeffs);

    std::vector<cplx> inside, outside;
    for (cplx r : roots) (std::abs(r) < 1.0 ? inside : outside).push_back(r);
    auto by_circle_distance = [](cplx a, cplx b) {
        return std::abs(1.0 - std::abs(a)) < std::abs(1.0 - std::abs(b));
    };
    std::sort(inside.begin(), inside.end(), by_circle_distance);
    std::sort(outside.begin(), outside.end(), by_circle_distance);
    for (cplx r : outside) {
        if (inside.size() >= k) break;
        inside.push_back(r);
    }
    if (inside.size() < k) throw std::runtime_error("music: too few roots");

    std::vector<double> freqs;
    for (std::size_t i = 0; i < k; ++i) freqs.push_back(angle_to_frequency(inside[i]));
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

std::vector<double> music(const ComplexSignal& y, std::size_t k) {
    return music(y, k, default_prediction_order(y.size()));
}

double music_pseudospectrum(const ComplexSignal& y, std::size_t k, std::size_t m, double f) {
    const CMatrix c = noise_projector(y, k, m);
    CVector a(c.rows());
    for (Eigen::Index p = 0; p < a.size(); ++p) {
        double turns = static_cast<double>(p) * f;
        turns -= std::floor(turns);
        a(p) = std::polar(1.0, kTwoPi * turns);
    }
    const double q = (a.transpose() * c * a.conjugate())(0).real();
    return 1.0 / q;
}

std::vector<double> matrix_pencil(const ComplexSignal& y, std::size_t k, std::size_t L) {
    const std::size_t n = y.size();
    if (k == 0 || L == 0 || L >= n || k > std::min(L, n - L))
        throw std::invalid_argument("matrix_pencil: need 1 <= k <= min(L, n - L)");
    // Columns of the Hankel matrix are shifted Vandermonde vectors, so the dominant left
    // singular subspace is shift-invariant with the signal poles as eigenvalues.
    const CMatrix h = hankel(y.samples(), static_cast<Eigen::Index>(n - L));
    const CMatrix u = truncated_svd_left(h, k);
    const Eigen::Index rows = u.rows();
    const CMatrix u1 = u.topRows(rows - 1);
    const CMatrix u2 = u.bottomRows(rows - 1);
    const CMatrix pencil = u1.completeOrthogonalDecomposition().solve(u2);
    Eigen::ComplexEigenSolver<CMatrix> solver(pencil, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("matrix_pencil: eigensolver failed");
    std::vector<double> freqs;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        freqs.push_back(angle_to_frequency(solver.eigenvalues()(i)));
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

std::vector<double> matrix_pencil(const ComplexSignal& y, std::size_t k) {
    return matrix_pencil(y, k, y.size() / 3);
}

CMatrix hankel_lift(const ComplexSignal& y) {
    return hankel(y.samples(), static_cast<Eigen::Index>(y.size() / 2 + 1));
}

ComplexSignal hankel_average(const CMatrix& h) {
    const Eigen::Index n = h.rows() + h.cols() - 1;
    CVector sum = CVector::Zero(n);
    RVector count = RVector::Zero(n);
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
        sum.segment(j, h.rows()) += h.col(j);
        count.segment(j, h.rows()).array() += 1.0;
    }
    return ComplexSignal(CVector(sum.array() / count.array().cast<cplx>()));
}

namespace {

template <typename Svd>
CMatrix truncate_rank(const Svd& svd, Eigen::Index rank) {
    return svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).template cast<cplx>().asDiagonal() *
           svd.matrixV().leftCols(rank).adjoint();
}

}  // namespace

ComplexSignal cadzow(const ComplexSignal& y, std::size_t k, std::size_t iters) {
    if (y.size() < 2) throw std::invalid_argument("cadzow: need n >= 2");
    CMatrix h = hankel_lift(y);
    const auto rank = static_cast<Eigen::Index>(k);
    if (rank < 1 || rank > std::min(h.rows(), h.cols()))
        throw std::invalid_argument("cadzow: need 1 <= k <= min Hankel dimension");
    ComplexSignal x = y;
    for (std::size_t it = 0; it < iters; ++it) {
        CMatrix low = truncate_rank(Eigen::BDCSVD<CMatrix>(h, Eigen::ComputeThinU | Eigen::ComputeThinV), rank);
        // Divide and conquer occasionally breaks down on nearly rank-k input; Jacobi does not.
        if (!low.allFinite())
            low = truncate_rank(Eigen::JacobiSVD<CMatrix>(h, Eigen::ComputeThinU | Eigen::ComputeThinV), rank);
        x = hankel_average(low);
        h = hankel_lift(x);
    }
    return x;
}

}  // namespace linespec
