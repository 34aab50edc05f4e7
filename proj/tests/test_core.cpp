#include "doctest.h"
#include "test_util.hpp"

#include "linespec/core.hpp"
#include "linespec/fft.hpp"

#include <stdexcept>

using namespace linespec;
using testutil::random_cvector;

TEST_CASE("ComplexSignal rejects empty and non-finite samples") {
    CHECK_THROWS_AS(ComplexSignal(CVector(0)), std::invalid_argument);
    CVector bad = CVector::Zero(3);
    bad(1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(ComplexSignal{bad}, std::invalid_argument);
    bad(1) = cplx(0.0, INFINITY);
    CHECK_THROWS_AS(ComplexSignal{bad}, std::invalid_argument);
    CHECK_THROWS_AS(ComplexSignal::zeros(0), std::invalid_argument);
}

TEST_CASE("ComplexSignal arithmetic checks lengths") {
    ComplexSignal a{1.0, 2.0};
    ComplexSignal b{cplx(0, 1), 1.0};
    const ComplexSignal s = a + b;
    CHECK(s[0] == cplx(1, 1));
    CHECK((s - b) == a);
    CHECK_THROWS_AS(a + ComplexSignal::zeros(3), std::invalid_argument);
}

TEST_CASE("LineSpectralModel sorts and validates") {
    LineSpectralModel m({{0.7, 1.0}, {0.2, 2.0}});
    REQUIRE(m.size() == 2);
    CHECK(m.components()[0].frequency == 0.2);
    CHECK(m.amplitude_l1() == doctest::Approx(3.0));
    CHECK_THROWS_AS(LineSpectralModel({{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(LineSpectralModel({{-0.1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(LineSpectralModel({{0.3, 1.0}, {0.3, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(LineSpectralModel({{0.3, cplx(NAN, 0)}}), std::invalid_argument);
}

TEST_CASE("HermitianMatrix stores one triangle") {
    HermitianMatrix h(3);
    h.set(0, 2, cplx(1, 2));
    CHECK(h(2, 0) == cplx(1, -2));
    h.set(2, 1, cplx(0, 3));
    CHECK(h(1, 2) == cplx(0, -3));
    h.set(1, 1, cplx(5, 7));
    CHECK(h(1, 1) == cplx(5, 0));
    const CMatrix d = h.dense();
    CHECK((d - d.adjoint()).norm() == 0.0);
    CHECK(HermitianMatrix::identity(4).dense() == CMatrix::Identity(4, 4));
    CHECK(HermitianMatrix::from_upper(d).dense() == d);
    CHECK(h.frobenius_norm() == doctest::Approx(d.norm()));
}

TEST_CASE("NormBracket invariants") {
    CHECK_NOTHROW(NormBracket(0.0, 0.0));
    CHECK_THROWS_AS(NormBracket(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(NormBracket(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(NormBracket(0.0, INFINITY), std::invalid_argument);
}

TEST_CASE("atom examples") {
    const ComplexSignal dc = atom(0.0, 0.0, 4);
    for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(dc[m] - 1.0) < 1e-15);
    const ComplexSignal nyq = atom(0.5, 0.0, 4);
    CHECK(std::abs(nyq[0] - 1.0) < 1e-15);
    CHECK(std::abs(nyq[1] + 1.0) < 1e-15);
    CHECK(std::abs(nyq[2] - 1.0) < 1e-15);
    CHECK(std::abs(nyq[3] + 1.0) < 1e-15);
    const ComplexSignal q = atom(0.25, 0.25, 2);
    CHECK(std::abs(q[0] - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(q[1] - cplx(-1, 0)) < 1e-15);
}

TEST_CASE("atom rejects bad arguments") {
    CHECK_THROWS_AS(atom(1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(atom(-0.1, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(atom(0.1, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(atom(0.1, 0.0, 0), std::invalid_argument);
}

TEST_CASE("atom norm is sqrt(n)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 200);
        const double sq = atom(u(rng), u(rng), n).squared_norm();
        CHECK(std::abs(sq - static_cast<double>(n)) <= 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("synthesize examples") {
    CHECK(synthesize(LineSpectralModel{}, 8) == ComplexSignal::zeros(8));
    const ComplexSignal dc = synthesize(LineSpectralModel({{0.0, 2.0}}), 3);
    for (std::size_t m = 0; m < 3; ++m) CHECK(std::abs(dc[m] - 2.0) < 1e-15);
    const ComplexSignal two = synthesize(LineSpectralModel({{0.5, 1.0}, {0.0, 1.0}}), 2);
    CHECK(std::abs(two[0] - 2.0) < 1e-15);
    CHECK(std::abs(two[1]) < 1e-15);
}

TEST_CASE("synthesize is linear in amplitudes") {
    const LineSpectralModel a({{0.1, cplx(1, 2)}, {0.4, cplx(-1, 0.5)}});
    const LineSpectralModel b({{0.1, cplx(3, 6)}, {0.4, cplx(-3, 1.5)}});
    const CVector diff = synthesize(b, 17).samples() - 3.0 * synthesize(a, 17).samples();
    CHECK(diff.norm() < 1e-13);
}

TEST_CASE("fft conventions match direct sums") {
    std::mt19937_64 rng(3);
    const CVector v = random_cvector(rng, 13);
    const std::size_t big_n = 64;
    const CVector fwd = fft::forward_padded(v, big_n);
    for (std::size_t m = 0; m < big_n; ++m) {
        const cplx ref = testutil::naive_poly(v, static_cast<double>(m) / big_n);
        CHECK(std::abs(fwd(static_cast<Eigen::Index>(m)) - ref) < 1e-12 * v.norm() * 4);
    }
    const CVector c = random_cvector(rng, 32);
    const CVector bwd = fft::backward(c);
    for (Eigen::Index j = 0; j < 32; ++j) {
        cplx ref = 0;
        for (Eigen::Index m = 0; m < 32; ++m) ref += c(m) * std::polar(1.0, kTwoPi * double(j * m % 32) / 32.0);
        CHECK(std::abs(bwd(j) - ref) < 1e-12 * c.norm() * 6);
    }
    CHECK_THROWS_AS(fft::forward_padded(v, 8), std::invalid_argument);
}

TEST_CASE("dual_atomic_norm examples") {
    CVector e1 = CVector::Zero(8);
    e1(0) = 1.0;
    const NormBracket b = dual_atomic_norm(e1, 64);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.upper >= b.lower);

    const CVector v = atom(0.3, 0.0, 8).samples().conjugate();
    // Sum_l conj(e^{i2pi l 0.3}) e^{-i2 pi l f} peaks where f = -0.3, i.e. 0.7 on [0,1).
    const NormBracket a = dual_atomic_norm(v, 4096);
    CHECK(std::abs(a.lower - 8.0) < 1e-3);
    double argmax = 0.0;
    const double scan = testutil::dense_scan_max(v, 20000, &argmax);
    CHECK(std::abs(scan - 8.0) < 1e-6);
    CHECK(testutil::circ_dist(argmax, 0.7) < 1e-4);

    const NormBracket z = dual_atomic_norm(CVector::Zero(8), 64);
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);
    CHECK_THROWS_AS(dual_atomic_norm(e1, 50), std::invalid_argument);
}

TEST_CASE("dual_atomic_norm bracket contains the dense-scan maximum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 4 + trial;
        const CVector v = random_cvector(rng, n);
        const std::size_t big_n = default_dual_grid(static_cast<std::size_t>(n));
        const NormBracket b = dual_atomic_norm(v, big_n);
        const double scan = testutil::dense_scan_max(v, 100 * big_n);
        CHECK(scan >= b.lower * (1 - 1e-12));
        CHECK(scan <= b.upper * (1 + 1e-12));
    }
}

TEST_CASE("dual_atomic_norm is homogeneous") {
    std::mt19937_64 rng(6);
    const CVector v = random_cvector(rng, 20);
    const cplx alpha(-2.5, 1.5);
    const NormBracket a = dual_atomic_norm(v, 1024);
    const NormBracket b = dual_atomic_norm(CVector(alpha * v), 1024);
    CHECK(b.lower == doctest::Approx(std::abs(alpha) * a.lower).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(std::abs(alpha) * a.upper).epsilon(1e-12));
}

TEST_CASE("toeplitz examples") {
    CVector u = CVector::Zero(4);
    u(0) = 1.0;
    CHECK(toeplitz(u).dense() == CMatrix::Identity(4, 4));

    CVector s = CVector::Zero(3);
    s(1) = 1.0;
    const CMatrix t = toeplitz(s).dense();
    CMatrix expect = CMatrix::Zero(3, 3);
    expect(0, 1) = expect(1, 2) = expect(1, 0) = expect(2, 1) = 1.0;
    CHECK(t == expect);

    CVector bad = CVector::Zero(2);
    bad(0) = cplx(1.0, 1e-3);
    CHECK_THROWS_AS(toeplitz(bad), std::invalid_argument);
    bad(0) = cplx(1.0, 1e-10);
    CHECK(toeplitz(bad)(0, 0) == cplx(1.0, 0.0));
}

TEST_CASE("toeplitz of random u is Hermitian and constant along diagonals") {
    std::mt19937_64 rng(8);
    CVector u = random_cvector(rng, 7);
    u(0) = u(0).real();
    const CMatrix t = toeplitz(u).dense();
    CHECK((t - t.adjoint()).norm() == 0.0);
    for (Eigen::Index r = 0; r < 7; ++r)
        for (Eigen::Index c = r; c < 7; ++c) CHECK(t(r, c) == (c == r ? cplx(u(0).real(), 0) : u(c - r)));
}

TEST_CASE("toeplitz_adjoint examples") {
    const CVector ti = toeplitz_adjoint(HermitianMatrix::identity(5));
    CHECK(ti(0) == cplx(5.0, 0.0));
    CHECK(ti.tail(4).norm() == 0.0);
    CHECK(toeplitz_adjoint(HermitianMatrix(4)).norm() == 0.0);
}

TEST_CASE("toeplitz adjoint identity under the real pairing") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 12;
        CVector u = random_cvector(rng, n);
        u(0) = u(0).real();
        const HermitianMatrix q = HermitianMatrix::from_upper(testutil::random_hermitian(rng, n));
        const double lhs = real_inner(toeplitz(u), q);
        const double rhs = real_inner(u, toeplitz_adjoint(q));
        // Also the direct Re tr(Q^* T(u)) from dense matrices.
        const double direct = (q.dense().adjoint() * toeplitz(u).dense()).trace().real();
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)) * 10);
        CHECK(std::abs(lhs - direct) <= 1e-12 * std::max(1.0, std::abs(lhs)) * 10);
    }
}
