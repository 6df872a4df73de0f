#include "doctest.h"
#include "generators.hpp"
#include "keller/matrix.hpp"
#include "keller/rigidity.hpp"

using namespace keller;

namespace {

ComplexMatrix s(int k) { return pauli(k); }
ComplexMatrix eye(Eigen::Index k) { return ComplexMatrix::Identity(k, k); }

ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// |V / |V| - W / |W||_max: equality up to a positive factor
double direction_gap(const ComplexMatrix& V, const ComplexMatrix& W) {
    return max_abs_diff(V / spectral_norm(V), W / spectral_norm(W));
}

// Displayed potentials, transcribed independently of the brick construction.
ComplexMatrix displayed_v(RaClass c, int n, int sign) {
    const double p = sign;
    const Eigen::Index N = dirac_size(n);
    if (n == 1) {
        switch (c) {
        case RaClass::i: return 0.5 * mat2(1 + p, 0, 0, 1 - p);
        case RaClass::ii: return 0.5 * I_unit * mat2(p, -1, 1, -p);
        case RaClass::iii: return 0.5 * (eye(2) + p * s(2));
        default: break;
        }
    }
    if (c == RaClass::iv && n % 2 == 1) {
        const ComplexMatrix t = mat2(p, -1, 1, -p);
        return -0.25 * kron_all({t, t, eye(N / 4)});
    }
    if (c == RaClass::iv) {
        ComplexMatrix v = ComplexMatrix::Zero(4, 4);
        v << 1 + p, -1 - p, 0, 0, 1 + p, -1 - p, 0, 0, 0, 0, -1 + p, -1 + p, 0, 0, 1 - p, 1 - p;
        return kron(0.25 * I_unit * v, eye(N / 4));
    }
    if ((c == RaClass::ii || c == RaClass::iii) && n % 2 == 0) {
        const double q = c == RaClass::ii ? -1.0 : 1.0;
        const ComplexMatrix a = eye(2) + p * s(2), b = s(1) - p * I_unit * s(3);
        const ComplexMatrix cc = s(1) + p * I_unit * s(3), d = eye(2) - p * s(2);
        ComplexMatrix v(8, 8);
        v << kron(a, a), q * kron(b, b), kron(cc, cc), q * kron(d, d);
        return kron(v / 8.0, eye(N / 8));
    }
    return {};
}

} // namespace

TEST_CASE("bricks annihilate the prescribed Pauli matrices") {
    for (int sign : {1, -1}) {
        const BrickPair b0 = brick(0, sign), b2 = brick(2, sign), b3 = brick(3, sign);
        // rho sigma_k tau^* vanishes for exactly two of sigma_0..sigma_3
        for (const BrickPair& b : {b0, b2, b3}) {
            int zeros = 0;
            for (int k = 0; k <= 3; ++k)
                if ((b.rho * s(k) * b.tau.adjoint()).cwiseAbs().maxCoeff() < 1e-15) ++zeros;
            CHECK(zeros == 2);
        }
        CHECK((b2.rho * s(1) * b2.tau.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((b2.rho * s(2) * b2.tau.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((b3.rho * s(1) * b3.tau.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((b3.rho * s(3) * b3.tau.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    }
    CHECK_THROWS_AS(brick(1, 1), PreconditionError);
    CHECK_THROWS_AS(brick(0, 2), PreconditionError);
}

TEST_CASE("examples verify with the expected class") {
    struct Case {
        RaClass c;
        std::vector<int> dims;
    };
    const std::vector<Case> cases = {{RaClass::i, {1, 2, 3, 4, 5, 6}},
                                     {RaClass::ii, {1, 3, 5, 6, 8}},
                                     {RaClass::iii, {1, 3, 5, 6}},
                                     {RaClass::iv, {3, 4, 5, 6}}};
    for (const auto& cs : cases)
        for (int n : cs.dims)
            for (int sign : {1, -1}) {
                CAPTURE(n);
                CAPTURE(to_string(cs.c));
                const RigidPotential p = example(cs.c, n, sign);
                const RAReport r = verify(p.A, p.B, dirac_matrices(n));
                CHECK(r.residual < 1e-13);
                REQUIRE(r.inferred.has_value());
                CHECK(*r.inferred == cs.c);
                CHECK(std::abs(r.norm_deviation_a) < 1e-13);
                CHECK(std::abs(r.norm_deviation_b) < 1e-13);
                CHECK(max_abs_diff(p.V, p.B.adjoint() * p.A) == 0.0);
            }
}

TEST_CASE("examples reproduce the displayed potentials up to normalization") {
    for (int sign : {1, -1}) {
        for (RaClass c : {RaClass::i, RaClass::ii, RaClass::iii})
            CHECK(direction_gap(example(c, 1, sign).V, displayed_v(c, 1, sign)) < 1e-14);
        for (int n : {3, 5}) CHECK(direction_gap(example(RaClass::iv, n, sign).V, displayed_v(RaClass::iv, n, sign)) < 1e-14);
        for (int n : {4, 6}) CHECK(direction_gap(example(RaClass::iv, n, sign).V, displayed_v(RaClass::iv, n, sign)) < 1e-14);
        for (RaClass c : {RaClass::ii, RaClass::iii})
            for (int n : {6, 8}) CHECK(direction_gap(example(c, n, sign).V, displayed_v(c, n, sign)) < 1e-14);
    }
}

TEST_CASE("inadmissible (class, n) pairs are explicit errors") {
    CHECK_THROWS_AS(example(RaClass::ii, 2, 1), PreconditionError);
    CHECK_THROWS_AS(example(RaClass::iii, 4, 1), PreconditionError);
    CHECK_THROWS_AS(example(RaClass::iv, 2, 1), PreconditionError);
    CHECK_THROWS_AS(example(RaClass::iv, 1, 1), PreconditionError);
    CHECK_THROWS_AS(parse_ra_class("v"), PreconditionError);
}

TEST_CASE("lifting by A (x) M, B (x) M^{-1} preserves the class") {
    gen::Source g(21);
    const std::vector<std::pair<RaClass, int>> cases = {{RaClass::i, 1}, {RaClass::i, 2}, {RaClass::ii, 1},
                                                        {RaClass::ii, 3}, {RaClass::iii, 1}, {RaClass::iii, 3},
                                                        {RaClass::iv, 3}, {RaClass::iv, 4}, {RaClass::ii, 6}};
    for (const auto& [c, n] : cases) {
        const RigidPotential p = example(c, n, 1);
        const DiracRep up = dirac_matrices(n + 2);
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix M = g.invertible2();
            const auto [A, B] = lift_pair(p.A, p.B, M);
            const RAReport r = verify(A, B, up, 1e-10 * std::max(1.0, spectral_norm(M) * spectral_norm(M.inverse())));
            CAPTURE(n);
            CHECK(r.residual < 1e-12 * spectral_norm(M) * spectral_norm(M.inverse()));
            REQUIRE(r.inferred.has_value());
            CHECK(*r.inferred == c);
            // (B (x) M^{-1})^* (A (x) M) = V (x) M^{-*} M
            CHECK(max_abs_diff(B.adjoint() * A, kron(p.V, M.inverse().adjoint() * M)) < 1e-12);
        }
        // unitary M reproduces V (x) I exactly
        const ComplexMatrix U = s(2);
        const auto [A, B] = lift_pair(p.A, p.B, U);
        CHECK(max_abs_diff(B.adjoint() * A, kron(p.V, eye(2))) < 1e-15);
    }
    CHECK_THROWS_AS(lift_pair(eye(2), eye(2), ComplexMatrix::Zero(2, 2)), PreconditionError);
}

TEST_CASE("polar split reconstructs V") {
    gen::Source g(22);
    for (int t = 0; t < 20; ++t) {
        const int N = 1 << g.integer(1, 3);
        const int r = g.integer(1, N);
        const ComplexMatrix V = g.matrix(N, r) * g.matrix(r, N);
        const PolarSplit ps = polar_split(V);
        CHECK(max_abs_diff(ps.B.adjoint() * ps.A, V) < 1e-12 * std::max(1.0, spectral_norm(V)));
        CHECK(max_abs_diff(ps.A, ps.A.adjoint()) < 1e-12 * std::max(1.0, spectral_norm(V)));
        CHECK(max_abs_diff(ps.A * ps.A, ps.W) < 1e-11 * std::max(1.0, spectral_norm(V)));
        CHECK(max_abs_diff(ps.U * ps.W, V) < 1e-12 * std::max(1.0, spectral_norm(V)));
    }
    for (RaClass c : {RaClass::i, RaClass::ii, RaClass::iii, RaClass::iv}) {
        const RigidPotential p = example(c, 3, -1);
        const PolarSplit ps = polar_split(p.V);
        CHECK(max_abs_diff(ps.B.adjoint() * ps.A, p.V) < 1e-14);
    }
}

TEST_CASE("constraint nullspace contains the known examples (positive control)") {
    for (auto [c, n] : std::vector<std::pair<RaClass, int>>{{RaClass::ii, 3}, {RaClass::iii, 3}, {RaClass::iv, 3},
                                                            {RaClass::iv, 4}, {RaClass::ii, 6}}) {
        const RigidPotential p = example(c, n, 1);
        const DiracRep rep = dirac_matrices(n);
        const ComplexMatrix basis = constraint_nullspace(c, rep, p.B);
        REQUIRE(basis.cols() > 0);
        const ComplexVector a = Eigen::Map<const ComplexVector>(p.A.data(), p.A.size());
        // projection onto the nullspace leaves vec(A) unchanged
        CHECK((basis * (basis.adjoint() * a) - a).norm() < 1e-12);
        CHECK(nullspace_admits_class(c, rep, p.B, basis));
    }
}

TEST_CASE("non-existence probes find no counterexample and serial equals parallel") {
    for (auto [c, n] : std::vector<std::pair<RaClass, int>>{{RaClass::iv, 1}, {RaClass::iv, 2}, {RaClass::ii, 2},
                                                            {RaClass::iii, 2}, {RaClass::ii, 4}, {RaClass::iii, 4}}) {
        const ProbeReport par = nonexistence_probe(c, n, 60, 7);
        const ProbeReport ser = nonexistence_probe_serial(c, n, 60, 7);
        CHECK(par.counterexamples == 0);
        CHECK(par.counterexamples == ser.counterexamples);
        CHECK(par.nullspace_dims == ser.nullspace_dims);
        CHECK(par.b_ranks == ser.b_ranks);
        // every family appears: some trials draw rank-deficient B
        const auto N = dirac_size(n);
        CHECK(std::count_if(par.b_ranks.begin(), par.b_ranks.end(), [&](int r) { return r < N; }) > 0);
    }
    CHECK_THROWS_AS(nonexistence_probe(RaClass::ii, 3, 10, 1), PreconditionError);
}

TEST_CASE("gaussian_matrix is deterministic per (seed, stream)") {
    CHECK(max_abs_diff(gaussian_matrix(3, 3, 5, 9), gaussian_matrix(3, 3, 5, 9)) == 0.0);
    CHECK(max_abs_diff(gaussian_matrix(3, 3, 5, 9), gaussian_matrix(3, 3, 5, 10)) > 0.0);
}
