#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace linespec {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Real inner product <a, b> = Re(b^* a) on C^n.
double real_inner(const CVector& a, const CVector& b);

/// Finite complex samples of fixed length n >= 1.
class ComplexSignal {
public:
    explicit ComplexSignal(CVector samples);
    ComplexSignal(std::initializer_list<cplx> samples);
    static ComplexSignal zeros(std::size_t n);

    std::size_t size() const { return static_cast<std::size_t>(samples_.size()); }
    const CVector& samples() const { return samples_; }
    cplx operator[](std::size_t i) const { return samples_(static_cast<Eigen::Index>(i)); }
    double norm() const { return samples_.norm(); }
    double squared_norm() const { return samples_.squaredNorm(); }

    friend bool operator==(const ComplexSignal& a, const ComplexSignal& b) {
        return a.samples_ == b.samples_;
    }

private:
    CVector samples_;
};

ComplexSignal operator+(const ComplexSignal& a, const ComplexSignal& b);
ComplexSignal operator-(const ComplexSignal& a, const ComplexSignal& b);

struct SpectralComponent {
    double frequency = 0.0;  // normalized, [0, 1)
    cplx amplitude{};
};

/// Sparse line spectrum: components sorted by frequency, frequencies distinct and in [0, 1).
class LineSpectralModel {
public:
    LineSpectralModel() = default;
    /// Sorts its input; rejects out-of-range or duplicate frequencies.
    explicit LineSpectralModel(std::vector<SpectralComponent> components);

    const std::vector<SpectralComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    bool empty() const { return components_.empty(); }
    std::vector<double> frequencies() const;
    /// Sum of amplitude moduli, the atomic norm of the synthesized signal when atoms are separated.
    double amplitude_l1() const;

private:
    std::vector<SpectralComponent> components_;
};

/// Hermitian matrix stored as its packed upper triangle (column-major packing).
/// The diagonal is kept real; the lower triangle is implied.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t dim);
    /// Reads the upper triangle of `dense`; the diagonal's imaginary part is dropped.
    static HermitianMatrix from_upper(const CMatrix& dense);
    static HermitianMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    cplx operator()(std::size_t row, std::size_t col) const;
    void set(std::size_t row, std::size_t col, cplx value);
    CMatrix dense() const;
    std::span<const cplx> packed() const { return packed_; }

    double frobenius_norm() const;

private:
    std::size_t index(std::size_t row, std::size_t col) const { return col * (col + 1) / 2 + row; }

    std::size_t dim_ = 0;
    std::vector<cplx> packed_;
};

/// Real Frobenius pairing Re tr(B^* A).
double real_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Certified interval [lower, upper] for a nonnegative quantity.
struct NormBracket {
    NormBracket(double lower, double upper);
    double lower;
    double upper;
};

/// a_m = e^{i2 pi phi} e^{i2 pi m f}, m = 0..n-1.
ComplexSignal atom(double f, double phi, std::size_t n);

ComplexSignal synthesize(const LineSpectralModel& model, std::size_t n);

/// Bracket on sup_f |sum_l v_l e^{-i2 pi l f}| from one length-N DFT.
/// Requires N > 2 pi n so that the Bernstein factor 1 - 2 pi n / N is positive.
NormBracket dual_atomic_norm(const CVector& v, std::size_t grid_size);
inline NormBracket dual_atomic_norm(const ComplexSignal& v, std::size_t grid_size) {
    return dual_atomic_norm(v.samples(), grid_size);
}

/// Smallest admissible dual-norm grid, 8 ceil(2 pi n), the default used across the toolkit.
std::size_t default_dual_grid(std::size_t n);

/// Hermitian Toeplitz matrix with first row u. u(0) must be real up to 1e-8 |u(0)|.
HermitianMatrix toeplitz(const CVector& u);

/// Adjoint of toeplitz() under the real pairings: entry 0 is the trace, entry j > 0 is twice
/// the sum along the j-th superdiagonal.
CVector toeplitz_adjoint(const HermitianMatrix& q);
CVector toeplitz_adjoint(const CMatrix& q);

}  // namespace linespec
