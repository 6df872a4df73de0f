#include "doctest.h"
#include "generators.hpp"
#include "keller/matrix.hpp"

#include <algorithm>

using namespace keller;

namespace {

// power iteration on m^* m; independent of the SVD route
double power_norm(const ComplexMatrix& m) {
    ComplexVector v = ComplexVector::Ones(m.cols());
    double s = 0;
    for (int it = 0; it < 2000; ++it) {
        v = m.adjoint() * (m * v);
        const double nv = v.norm();
        if (nv == 0) return 0;
        v /= nv;
        s = std::sqrt(nv);
    }
    return (m * v).norm();
}

} // namespace

TEST_CASE("pauli matrices satisfy the quaternion relations") {
    for (int j = 1; j <= 3; ++j) {
        CHECK(max_abs_diff(pauli(j) * pauli(j), pauli(0)) == 0.0);
        CHECK(max_abs_diff(pauli(j).adjoint(), pauli(j)) == 0.0);
    }
    CHECK(max_abs_diff(pauli(1) * pauli(2), I_unit * pauli(3)) == 0.0);
    CHECK(max_abs_diff(pauli(2) * pauli(3), I_unit * pauli(1)) == 0.0);
    CHECK(max_abs_diff(pauli(3) * pauli(1), I_unit * pauli(2)) == 0.0);
    CHECK_THROWS_AS(pauli(4), PreconditionError);
}

TEST_CASE("kron: index convention and mixed-product property") {
    gen::Source g(11);
    const ComplexMatrix a = g.matrix(2, 3), b = g.matrix(3, 2);
    const ComplexMatrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    CHECK(k(1 * 3 + 2, 2 * 2 + 1) == a(1, 2) * b(2, 1));
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix A = g.matrix(2, 2), B = g.matrix(3, 3), C = g.matrix(2, 2), D = g.matrix(3, 3);
        CHECK(max_abs_diff(kron(A, B) * kron(C, D), kron(A * C, B * D)) < 1e-12);
        CHECK(max_abs_diff(kron(A, B).adjoint(), kron(A.adjoint(), B.adjoint())) == 0.0);
    }
    CHECK(kron_pow(pauli(1), 0).rows() == 1);
    CHECK(max_abs_diff(kron_pow(pauli(2), 2), kron(pauli(2), pauli(2))) == 0.0);
    CHECK(max_abs_diff(kron_all({pauli(1), pauli(2), pauli(3)}), kron(kron(pauli(1), pauli(2)), pauli(3))) == 0.0);
    CHECK_THROWS_AS(kron_all({}), PreconditionError);
}

TEST_CASE("spectral_norm agrees with power iteration") {
    gen::Source g(12);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix m = g.matrix(g.integer(1, 9), g.integer(1, 9));
        CHECK(spectral_norm(m) == doctest::Approx(power_norm(m)).epsilon(1e-9));
    }
    CHECK(spectral_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
    CHECK(spectral_norm(pauli(2)) == doctest::Approx(1.0));
}

TEST_CASE("nullspace columns are orthonormal and annihilated") {
    gen::Source g(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int r = g.integer(1, 4);
        const ComplexMatrix m = g.matrix(6, r) * g.matrix(r, 7);
        const ComplexMatrix ns = nullspace(m);
        CHECK(ns.cols() == 7 - r);
        CHECK((m * ns).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(max_abs_diff(ns.adjoint() * ns, ComplexMatrix::Identity(ns.cols(), ns.cols())) < 1e-12);
    }
}

TEST_CASE("eigen_decompose: residuals and agreement with the characteristic polynomial") {
    gen::Source g(14);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = g.integer(2, 12);
        const ComplexMatrix m = g.matrix(n, n);
        const EigenDecomposition ed = eigen_decompose(m);
        for (int k = 0; k < n; ++k) {
            const ComplexVector r = m * ed.vectors.col(k) - ed.values(k) * ed.vectors.col(k);
            CHECK(r.norm() < 1e-10 * std::max(1.0, spectral_norm(m)));
            CHECK(ed.vectors.col(k).norm() == doctest::Approx(1.0));
            // det(m - lambda) ~ 0 relative to the scale of the matrix
            const double det = std::abs((m - ed.values(k) * ComplexMatrix::Identity(n, n)).determinant());
            CHECK(det < 1e-8 * std::pow(std::max(1.0, spectral_norm(m)), n));
        }
        const ComplexVector ev = eigenvalues(m);
        CHECK(std::abs(ev.sum() - m.trace()) < 1e-10 * n);
    }
    // triangular: eigenvalues are the diagonal
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t << 1.0, 5.0, 2.0, 0.0, cplx(0, 2), 7.0, 0.0, 0.0, -3.0;
    ComplexVector ev = eigenvalues(t);
    std::vector<double> re;
    for (int k = 0; k < 3; ++k) re.push_back(ev(k).real() + 10 * ev(k).imag());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-3.0));
    CHECK(re[1] == doctest::Approx(1.0));
    CHECK(re[2] == doctest::Approx(20.0));
    CHECK_THROWS_AS(eigenvalues(ComplexMatrix::Zero(2, 3)), PreconditionError);
}

TEST_CASE("herm_sqrt squares back and rejects indefinite input") {
    gen::Source g(15);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix x = g.matrix(5, 3);
        const ComplexMatrix p = x * x.adjoint();  // PSD, rank 3
        const ComplexMatrix s = herm_sqrt(p);
        CHECK(max_abs_diff(s * s, p) < 1e-10 * std::max(1.0, spectral_norm(p)));
        CHECK(max_abs_diff(s, s.adjoint()) < 1e-12 * std::max(1.0, spectral_norm(p)));
    }
    CHECK_THROWS_AS(herm_sqrt(pauli(3)), PreconditionError);
    CHECK_THROWS_AS(herm_sqrt(g.matrix(3, 3)), PreconditionError);
}
