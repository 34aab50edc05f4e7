#include "linespec/core.hpp"

#include "linespec/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linespec {
namespace {

bool all_finite(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
    return true;
}

void require_unit_interval(double value, const char* what) {
    if (!(value >= 0.0 && value < 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1), got " +
                                    std::to_string(value));
}

}  // namespace

double real_inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("real_inner: length mismatch");
    return b.dot(a).real();  // Eigen's dot conjugates its left operand
}

ComplexSignal::ComplexSignal(CVector samples) : samples_(std::move(samples)) {
    if (samples_.size() < 1) throw std::invalid_argument("ComplexSignal: length must be >= 1");
    if (!all_finite(samples_)) throw std::invalid_argument("ComplexSignal: non-finite sample");
}

ComplexSignal::ComplexSignal(std::initializer_list<cplx> samples)
    : ComplexSignal(CVector::Map(samples.begin(), static_cast<Eigen::Index>(samples.size()))) {}

ComplexSignal ComplexSignal::zeros(std::size_t n) {
    return ComplexSignal(CVector::Zero(static_cast<Eigen::Index>(n)));
}

ComplexSignal operator+(const ComplexSignal& a, const ComplexSignal& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ComplexSignal: length mismatch");
    return ComplexSignal(a.samples() + b.samples());
}

ComplexSignal operator-(const ComplexSignal& a, const ComplexSignal& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ComplexSignal: length mismatch");
    return ComplexSignal(a.samples() - b.samples());
}

LineSpectralModel::LineSpectralModel(std::vector<SpectralComponent> components)
    : components_(std::move(components)) {
    for (const auto& c : components_) {
        require_unit_interval(c.frequency, "frequency");
        if (!std::isfinite(c.amplitude.real()) || !std::isfinite(c.amplitude.imag()))
            throw std::invalid_argument("LineSpectralModel: non-finite amplitude");
    }
    std::sort(components_.begin(), components_.end(),
              [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
    for (std::size_t i = 1; i < components_.size(); ++i)
        if (components_[i].frequency == components_[i - 1].frequency)
            throw std::invalid_argument("LineSpectralModel: duplicate frequency");
}

std::vector<double> LineSpectralModel::frequencies() const {
    std::vector<double> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.frequency);
    return out;
}

double LineSpectralModel::amplitude_l1() const {
    double sum = 0.0;
    for (const auto& c : components_) sum += std::abs(c.amplitude);
    return sum;
}

HermitianMatrix::HermitianMatrix(std::size_t dim) : dim_(dim), packed_(dim * (dim + 1) / 2) {}

HermitianMatrix HermitianMatrix::from_upper(const CMatrix& dense) {
    if (dense.rows() != dense.cols()) throw std::invalid_argument("HermitianMatrix: not square");
    const auto d = static_cast<std::size_t>(dense.rows());
    HermitianMatrix h(d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < c; ++r)
            h.packed_[h.index(r, c)] = dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        h.packed_[h.index(c, c)] =
            cplx(dense(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)).real(), 0.0);
    }
    return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
    HermitianMatrix h(dim);
    for (std::size_t i = 0; i < dim; ++i) h.packed_[h.index(i, i)] = 1.0;
    return h;
}

cplx HermitianMatrix::operator()(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_) throw std::out_of_range("HermitianMatrix: index");
    return row <= col ? packed_[index(row, col)] : std::conj(packed_[index(col, row)]);
}

void HermitianMatrix::set(std::size_t row, std::size_t col, cplx value) {
    if (row >= dim_ || col >= dim_) throw std::out_of_range("HermitianMatrix: index");
    if (row == col) value = cplx(value.real(), 0.0);
    if (row <= col)
        packed_[index(row, col)] = value;
    else
        packed_[index(col, row)] = std::conj(value);
}

CMatrix HermitianMatrix::dense() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    CMatrix m(d, d);
    for (std::size_t c = 0; c < dim_; ++c) {
        for (std::size_t r = 0; r <= c; ++r) {
            const cplx v = packed_[index(r, c)];
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = std::conj(v);
        }
    }
    return m;
}

double HermitianMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (std::size_t c = 0; c < dim_; ++c)
        for (std::size_t r = 0; r <= c; ++r)
            sum += (r == c ? 1.0 : 2.0) * std::norm(packed_[index(r, c)]);
    return std::sqrt(sum);
}

double real_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("real_inner: dimension mismatch");
    // Off-diagonal pairs contribute 2 Re(conj(b_rc) a_rc).
    double sum = 0.0;
    for (std::size_t c = 0; c < a.dim(); ++c)
        for (std::size_t r = 0; r <= c; ++r)
            sum += (r == c ? 1.0 : 2.0) * (std::conj(b(r, c)) * a(r, c)).real();
    return sum;
}

NormBracket::NormBracket(double lo, double hi) : lower(lo), upper(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi)
        throw std::invalid_argument("NormBracket: need 0 <= lower <= upper, finite");
}

ComplexSignal atom(double f, double phi, std::size_t n) {
    require_unit_interval(f, "frequency");
    require_unit_interval(phi, "phase");
    if (n == 0) throw std::invalid_argument("atom: n must be >= 1");
    CVector a(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < n; ++m) {
        double turns = phi + static_cast<double>(m) * f;
        turns -= std::floor(turns);
        a(static_cast<Eigen::Index>(m)) = std::polar(1.0, kTwoPi * turns);
    }
    return ComplexSignal(std::move(a));
}

ComplexSignal synthesize(const LineSpectralModel& model, std::size_t n) {
    if (n == 0) throw std::invalid_argument("synthesize: n must be >= 1");
    CVector x = CVector::Zero(static_cast<Eigen::Index>(n));
    for (const auto& c : model.components()) x += c.amplitude * atom(c.frequency, 0.0, n).samples();
    return ComplexSignal(std::move(x));
}

NormBracket dual_atomic_norm(const CVector& v, std::size_t grid_size) {
    const double n = static_cast<double>(v.size());
    const double bernstein = 1.0 - kTwoPi * n / static_cast<double>(grid_size);
    if (bernstein <= 0.0)
        throw std::invalid_argument("dual_atomic_norm: grid size must exceed 2 pi n");
    const CVector spectrum = fft::forward_padded(v, grid_size);
    const double lower = spectrum.cwiseAbs().maxCoeff();
    return NormBracket(lower, lower / bernstein);
}

std::size_t default_dual_grid(std::size_t n) {
    return 8 * static_cast<std::size_t>(std::ceil(kTwoPi * static_cast<double>(n)));
}

HermitianMatrix toeplitz(const CVector& u) {
    const auto n = static_cast<std::size_t>(u.size());
    if (n == 0) throw std::invalid_argument("toeplitz: empty input");
    if (std::abs(u(0).imag()) > 1e-8 * std::abs(u(0)))
        throw std::invalid_argument("toeplitz: first entry must be real");
    HermitianMatrix t(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r <= c; ++r) t.set(r, c, u(static_cast<Eigen::Index>(c - r)));
    return t;
}

CVector toeplitz_adjoint(const CMatrix& q) {
    const Eigen::Index n = q.rows();
    CVector out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx diag_sum = 0.0;
        for (Eigen::Index r = 0; r + j < n; ++r) diag_sum += q(r, r + j);
        out(j) = j == 0 ? cplx(diag_sum.real(), 0.0) : 2.0 * diag_sum;
    }
    return out;
}

CVector toeplitz_adjoint(const HermitianMatrix& q) {
    const auto n = q.dim();
    CVector out(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        cplx diag_sum = 0.0;
        for (std::size_t r = 0; r + j < n; ++r) diag_sum += q(r, r + j);
        out(static_cast<Eigen::Index>(j)) = j == 0 ? cplx(diag_sum.real(), 0.0) : 2.0 * diag_sum;
    }
    return out;
}

}  // namespace linespec
