#include "doctest.h"
#include "keller/clifford.hpp"
#include "keller/matrix.hpp"

using namespace keller;

namespace {

ComplexMatrix s(int k) { return pauli(k); }

// Hand-written families for n <= 4.
std::vector<ComplexMatrix> frozen(int n) {
    switch (n) {
    case 1: return {s(1), s(3)};
    case 2: return {s(1), s(2), s(3)};
    case 3: return {kron(s(1), s(1)), kron(s(1), s(2)), kron(s(1), s(3)), kron(s(3), s(0))};
    case 4: return {kron(s(1), s(0)), kron(s(2), s(1)), kron(s(2), s(2)), kron(s(2), s(3)), kron(s(3), s(0))};
    default: return {};
    }
}

} // namespace

TEST_CASE("small dimensions match the hand-written families") {
    for (int n = 1; n <= 4; ++n) {
        const DiracRep rep = dirac_matrices(n);
        const auto ref = frozen(n);
        REQUIRE(rep.alphas.size() == ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) CHECK(max_abs_diff(rep.alphas[k], ref[k]) == 0.0);
    }
}

TEST_CASE("sizes follow 2^ceil(n/2)") {
    CHECK(dirac_size(1) == 2);
    CHECK(dirac_size(2) == 2);
    CHECK(dirac_size(3) == 4);
    CHECK(dirac_size(4) == 4);
    CHECK(dirac_size(9) == 32);
    CHECK(dirac_matrices(7).alphas.size() == 8);
}

TEST_CASE("Clifford relations, closed form and alpha-tilde for n = 1..10") {
    for (int n = 1; n <= 10; ++n) {
        CAPTURE(n);
        const DiracRep rep = dirac_matrices(n);
        const CliffordReport r = check_clifford(rep);
        CHECK(r.anticommutator < 1e-14);
        CHECK(r.hermiticity == 0.0);
        CHECK(r.mass_block == 0.0);
        CHECK(r.closed_form == 0.0);
        CHECK(r.tilde_closed_form < 1e-13);
        CHECK(r.tilde_square < 1e-13);
        CHECK(r.tilde_adjoint < 1e-13);
        CHECK(r.tilde_commutation < 1e-13);
        CHECK(r.beta_relation < 1e-14);
        CHECK(r.passed());
    }
}

TEST_CASE("alpha-tilde against a direct product") {
    for (int n = 1; n <= 8; ++n) {
        const DiracRep rep = dirac_matrices(n);
        ComplexMatrix prod = ComplexMatrix::Identity(rep.N, rep.N);
        for (const auto& a : rep.alphas) prod = prod * a;
        cplx phase = 1.0;
        for (int j = 0; j < n / 2; ++j) phase *= -I_unit;
        const ComplexMatrix expect =
            n % 2 ? ComplexMatrix(-I_unit * kron(s(2), ComplexMatrix::Identity(rep.N / 2, rep.N / 2)))
                  : ComplexMatrix::Identity(rep.N, rep.N);
        CHECK(max_abs_diff(phase * prod, expect) < 1e-13);
        CHECK(max_abs_diff(alpha_tilde(rep), expect) < 1e-13);
    }
}

TEST_CASE("every alpha_k anticommutes with alpha_{n+1}, so it is block off-diagonal") {
    for (int n = 1; n <= 6; ++n) {
        const DiracRep rep = dirac_matrices(n);
        REQUIRE(rep.betas.size() == static_cast<std::size_t>(n));
        const Eigen::Index h = rep.N / 2;
        for (int k = 0; k < n; ++k) {
            CHECK(rep.alphas[k].topLeftCorner(h, h).cwiseAbs().maxCoeff() == 0.0);
            CHECK(max_abs_diff(rep.alphas[k].topRightCorner(h, h), rep.betas[k]) == 0.0);
        }
    }
}

TEST_CASE("recursion identity for all admissible (n, m), n <= 8") {
    for (int n = 2; n <= 8; ++n)
        for (int m = 2; m <= n; ++m) {
            if ((n - m) % 2) continue;
            CAPTURE(n);
            CAPTURE(m);
            const RecursionReport r = recursion_check(n, m);
            CHECK(r.passed());
            CHECK(r.branch_count[0] + r.branch_count[1] + r.branch_count[2] == n + 1);
        }
    CHECK_THROWS_AS(recursion_check(5, 4), PreconditionError);
    CHECK_THROWS_AS(recursion_check(5, 1), PreconditionError);
    CHECK_THROWS_AS(recursion_check(4, 6), PreconditionError);
}

TEST_CASE("dimension limits are explicit errors") {
    CHECK_THROWS_AS(dirac_matrices(0), PreconditionError);
    CHECK_THROWS_AS(dirac_matrices(21), PreconditionError);
    CHECK_THROWS_AS(dirac_matrices(9, 8), PreconditionError);
    CHECK_NOTHROW(dirac_matrices(12));
}
