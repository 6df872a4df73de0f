#include "doctest.h"
#include "generators.hpp"
#include "keller/lab.hpp"
#include "keller/matrix.hpp"

#include <cmath>

using namespace keller;

namespace {

GridModel grid(int M, double L) {
    GridModel g;
    g.M = M;
    g.L = L;
    return g;
}

cplx random_z(gen::Source& g) {
    cplx z(g.uniform(-3, 3), g.uniform(0.3, 3));
    return g.integer(0, 1) ? z : std::conj(z);
}

ScalarProfile zero_profile(const GridModel& g) {
    ScalarProfile p;
    p.description = "zero";
    p.values.assign(static_cast<std::size_t>(g.M), 0.0);
    return p;
}

} // namespace

TEST_CASE("one-dimensional Laplace kernel attains its bound on the diagonal") {
    gen::Source g(61);
    for (int t = 0; t < 20; ++t) {
        const cplx z = random_z(g) * g.uniform(0.1, 30.0);
        const KernelCheck k = schrodinger_kernel_bound_check(z, 41);
        CHECK(std::abs(k.diagonal_ratio - 1.0) < 1e-12);
        CHECK(k.ratio <= 1.0 + 1e-12);
    }
    const KernelCheck a = schrodinger_kernel_bound_check(cplx(0, 4), 11);
    CHECK(a.bound == doctest::Approx(0.25));
    CHECK(a.sup == doctest::Approx(0.25));
    const KernelCheck b = schrodinger_kernel_bound_check(cplx(-1, 0), 11);
    CHECK(b.sup == doctest::Approx(0.5));
    CHECK_THROWS_AS(schrodinger_kernel_bound_check(cplx(2, 0), 11), SingularPointError);
}

TEST_CASE("grid model and DFT") {
    const GridModel g = grid(32, 8.0);
    const ComplexMatrix F = dft_matrix(g);
    CHECK(max_abs_diff(F * F.adjoint(), ComplexMatrix::Identity(32, 32)) < 1e-13);
    const auto xi = g.freqs();
    CHECK(xi[0] == 0.0);
    CHECK(xi[16] == doctest::Approx(-2 * std::numbers::pi * 16 / 8.0));
    CHECK_THROWS_AS(grid(48, 1.0).validate(), PreconditionError);
    CHECK_THROWS_AS(grid(8, 1.0).validate(), PreconditionError);
    // -i d/dx on e^{i xi x} returns xi e^{i xi x}
    const ComplexMatrix D = derivative_matrix(g);
    const auto x = g.xs();
    ComplexVector u(32);
    for (int j = 0; j < 32; ++j) u(j) = std::polar(1.0, xi[3] * x[static_cast<std::size_t>(j)]);
    CHECK(((D * u) - xi[3] * u).norm() < 1e-12);
}

TEST_CASE("free Dirac resolvent: multiplier, kernel and dense LU agree") {
    gen::Source gs(62);
    for (int n : {1, 3}) {
        const GridModel g = grid(64, 10.0);
        const Fiber f = fiber(n);
        const Eigen::Index N = f.alpha1.rows();
        for (int t = 0; t < 4; ++t) {
            const double m = gs.uniform(0.0, 2.0);
            const cplx z = random_z(gs);
            const DiscreteOperator R = free_dirac_resolvent(g, f, m, z);
            REQUIRE(R.dense.has_value());
            const ComplexMatrix H = dirac_dense(g, f, m) - z * ComplexMatrix::Identity(64 * N, 64 * N);
            const ComplexMatrix oracle = H.partialPivLu().inverse();
            CHECK(max_abs_diff(*R.dense, oracle) < 1e-9);
            const ComplexVector u = gs.matrix(64 * N, 1).col(0);
            CHECK((R.apply_multiplier(u) - *R.dense * u).norm() < 1e-10 * u.norm());
        }
    }
    // m = 0, z = i, constant mode: symbol = i I
    const DiscreteOperator R0 = free_dirac_resolvent(grid(16, 4.0), fiber(1), 0.0, I_unit, false);
    CHECK(max_abs_diff(R0.symbols[0], I_unit * ComplexMatrix::Identity(2, 2)) < 1e-15);
    CHECK_FALSE(R0.dense.has_value());
    // symbols at +-xi share their norm
    const DiscreteOperator R1 = free_dirac_resolvent(grid(16, 4.0), fiber(1), 1.0, cplx(0.4, 1.1), false);
    CHECK(spectral_norm(R1.symbols[3]) == doctest::Approx(spectral_norm(R1.symbols[13])));
    // resonance: z^2 - m^2 = xi_1^2
    const GridModel g = grid(16, 4.0);
    const double xi1 = g.freqs()[1];
    CHECK_THROWS_AS(free_dirac_resolvent(g, fiber(1), 1.0, std::sqrt(cplx(xi1 * xi1 + 1.0)), false),
                    SingularPointError);
}

TEST_CASE("Birman-Schwinger operator equals its factorized form for every rigid class") {
    gen::Source gs(63);
    const GridModel g = grid(32, 16.0);
    const ScalarProfile v = parse_profile("gaussian:amp=1.3,width=0.7", g);
    const std::vector<std::pair<RaClass, int>> cases = {{RaClass::i, 1},   {RaClass::i, 2},   {RaClass::ii, 1},
                                                        {RaClass::ii, 3},  {RaClass::iii, 1}, {RaClass::iii, 3},
                                                        {RaClass::iv, 3},  {RaClass::iv, 4},  {RaClass::ii, 6}};
    for (const auto& [c, n] : cases) {
        CAPTURE(to_string(c));
        CAPTURE(n);
        const RigidPotential pot = example(c, n, n % 2 ? 1 : -1);
        for (int t = 0; t < 20; ++t) {
            const double m = gs.uniform(0.0, 2.0);
            const BirmanSchwinger bs = birman_schwinger(g, pot, v, m, random_z(gs));
            if (bs.deviation_is_absolute) CHECK(bs.factorized_deviation < 1e-12);
            else CHECK(bs.factorized_deviation < 1e-9);
            CHECK(bs.factorized_norm == doctest::Approx(bs.norm).epsilon(1e-9).scale(1e-12));
        }
    }
}

TEST_CASE("the Birman-Schwinger operator vanishes for RA(iv) and for massless RA(ii)") {
    gen::Source gs(64);
    const GridModel g = grid(32, 16.0);
    const ScalarProfile v = parse_profile("gaussian:amp=2,width=1", g);
    for (int n : {3, 4, 5}) {
        const RigidPotential pot = example(RaClass::iv, n, 1);
        for (int t = 0; t < 10; ++t) CHECK(birman_schwinger(g, pot, v, gs.uniform(0, 3), random_z(gs)).norm < 1e-12);
    }
    for (int n : {1, 3}) {
        const RigidPotential pot = example(RaClass::ii, n, -1);
        for (int t = 0; t < 10; ++t) CHECK(birman_schwinger(g, pot, v, 0.0, random_z(gs)).norm < 1e-12);
    }
}

TEST_CASE("non-rigid potentials are rejected") {
    gen::Source gs(65);
    const GridModel g = grid(16, 16.0);
    const ScalarProfile v = parse_profile("gaussian:amp=1,width=1", g);
    RigidPotential pot;
    pot.n = 1;
    pot.A = gs.matrix(2, 2);
    pot.B = gs.matrix(2, 2);
    pot.V = pot.B.adjoint() * pot.A;
    CHECK_THROWS_AS(birman_schwinger(g, pot, v, 1.0, I_unit), PreconditionError);
}

TEST_CASE("RA(ii) Birman-Schwinger norm sits below (m/2)|z^2-m^2|^{-1/2}|v|_1") {
    const GridModel g = grid(512, 40.0);
    const ScalarProfile v = parse_profile("gaussian:amp=1,width=1", g);
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const double m = 2.0;
    const cplx z(0, 3);
    const double bound = 0.5 * m / std::sqrt(std::abs(z * z - m * m)) * v.l1_norm;
    const BirmanSchwinger bs = birman_schwinger(g, pot, v, m, z, false);
    CHECK(bs.norm <= bound * 1.05);
    CHECK(birman_schwinger(g, pot, v, 1.0, cplx(0, 100), false).norm < 0.05);
}

TEST_CASE("profile grammar") {
    const GridModel g = grid(256, 40.0);
    const ScalarProfile ga = parse_profile("gaussian:amp=1.5,width=1", g);
    CHECK(ga.l1_norm == doctest::Approx(1.5).epsilon(1e-10));
    const ScalarProfile st = parse_profile("step:r0=2,amp=0.5", g);
    CHECK(st.l1_norm == doctest::Approx(0.5 * (2 * 2.0 + g.h())).epsilon(0.05));
    const ScalarProfile de = parse_profile("delta:amp=3", g);
    CHECK(de.l1_norm == doctest::Approx(3.0));
    CHECK(scaled(ga, 2.0).l1_norm == doctest::Approx(3.0));
    CHECK_THROWS_AS(parse_profile("gaussian:amp=1,width=30", g), PreconditionError);
    CHECK_THROWS_AS(parse_profile("gaussian:amp=1,wdth=1", g), PreconditionError);
    CHECK_THROWS_AS(parse_profile("square:amp=1", g), PreconditionError);
    CHECK_THROWS_AS(parse_profile("gaussian", g), PreconditionError);
    CHECK_THROWS_AS(parse_profile("step:r0=25,amp=1", g), PreconditionError);
}

TEST_CASE("free operator has no surviving eigenvalues") {
    const GridModel g = grid(128, 20.0);
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const EnclosureCheckReport r = perturbed_spectrum(g, pot, zero_profile(g), 1.0, default_spec(Theorem::T2_1, 1, 0));
    CHECK(r.kept == 0);
    CHECK(r.violations == 0);
    CHECK(r.eigenvalues.size() == 256u);
    for (const EigenEntry& e : r.eigenvalues) CHECK(e.free_distance < 1e-10);
}

TEST_CASE("RA(iv) potentials leave the free spectrum unchanged") {
    const GridModel g = grid(64, 20.0);
    const RigidPotential pot = example(RaClass::iv, 4, 1);
    const ScalarProfile v = parse_profile("gaussian:amp=2,width=1", g);
    const EnclosureCheckReport r = perturbed_spectrum(g, pot, v, 1.0, default_spec(Theorem::T2_1, 1, 0));
    double worst = 0;
    for (const EigenEntry& e : r.eigenvalues) worst = std::max(worst, e.free_distance);
    // the perturbed operator is not normal; defective free eigenvalues move by O(sqrt(eps))
    CHECK(worst < 1e-6);
    CHECK(r.kept == 0);
}

TEST_CASE("eigenvalues stay within |v|_inf |B^*A| of the free spectrum and shrink linearly") {
    const GridModel g = grid(128, 20.0);
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const ScalarProfile v = parse_profile("gaussian:amp=1,width=1", g);
    const double vn = spectral_norm(pot.V);
    std::vector<double> worst;
    for (double s : {0.4, 0.2, 0.1}) {
        const ScalarProfile vs = scaled(v, s);
        double vinf = 0;
        for (const cplx& x : vs.values) vinf = std::max(vinf, std::abs(x));
        const EnclosureCheckReport r = perturbed_spectrum(g, pot, vs, 1.0, default_spec(Theorem::T2_1, 1, 0));
        double w = 0;
        for (const EigenEntry& e : r.eigenvalues) {
            // the free operator is normal, so every eigenvalue obeys the Bauer-Fike bound
            CHECK(e.free_distance <= vinf * vn * (1 + 1e-9));
            w = std::max(w, e.free_distance);
        }
        worst.push_back(w);
    }
    CHECK(worst[1] / worst[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(worst[2] / worst[1] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("enclosures of larger norm keep every previously enclosed eigenvalue") {
    const GridModel g = grid(128, 20.0);
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const ScalarProfile v = parse_profile("gaussian:amp=1.5,width=1", g);
    const EnclosureCheckReport r = perturbed_spectrum(g, pot, v, 1.0, default_spec(Theorem::T2_1, 1, 0));
    for (double s : {1.2, 2.0, 5.0}) {
        const EnclosureSpec big = default_spec(Theorem::T2_1, 1.0, s * v.l1_norm);
        for (const EigenEntry& e : r.eigenvalues)
            if (e.tag == FilterTag::kept && !e.violates) CHECK(member(big, e.z));
    }
    CHECK(r.spec.norm_value == doctest::Approx(1.5));
    CHECK_THROWS_AS(perturbed_spectrum(grid(8192, 20.0), pot, parse_profile("gaussian:amp=1,width=1", grid(8192, 20.0)),
                                       1.0, default_spec(Theorem::T2_1, 1, 0)),
                    PreconditionError);
}

TEST_CASE("sweeps mark failed points and the fitted slope recovers a power law") {
    const GridModel g = grid(64, 10.0);
    const RigidPotential pot = example(RaClass::ii, 1, 1);
    const ScalarProfile v = parse_profile("gaussian:amp=1,width=0.5", g);
    const double xi1 = g.freqs()[1];
    const std::vector<cplx> zs = {cplx(0, 2), std::sqrt(cplx(xi1 * xi1 + 1.0)), cplx(1.5, 0.5)};
    const auto pts = bs_norm_sweep(g, pot, v, 1.0, zs);
    CHECK(pts[0].ok);
    CHECK_FALSE(pts[1].ok);
    CHECK(std::isnan(pts[1].bs_norm));
    CHECK(pts[2].ok);
    CHECK(pts[0].kappa_bound == doctest::Approx(1.0 / std::sqrt(5.0) * v.l1_norm));

    std::vector<double> x, y;
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
        x.push_back(t);
        y.push_back(3.0 * std::pow(t, -0.5));
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(-0.5));
    CHECK(z_rectangle(0, 1, 0, 1, 3, 2).size() == 6u);
}
