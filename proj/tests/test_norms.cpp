#include "doctest.h"
#include "generators.hpp"
#include "keller/norms.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace keller;

namespace {

RadialProfile indicator(double r0, int n) {
    RadialProfile p;
    p.r = {r0};
    p.value = {1.0};
    p.n = n;
    return p;
}

RadialProfile random_steps(gen::Source& g, int n) {
    RadialProfile p;
    p.n = n;
    double r = 0;
    const int k = g.integer(1, 8);
    for (int i = 0; i < k; ++i) {
        r += g.uniform(0.05, 1.0);
        p.r.push_back(r);
        p.value.push_back(g.uniform(0.0, 3.0));
    }
    return p;
}

// midpoint quadrature of p int t^{q-1} mu{f >= t}^{q/p} dt with a brute-force distribution function
double lorentz_quadrature(const RadialProfile& f, double p, double q) {
    double top = 0;
    for (double v : f.value) top = std::max(top, v);
    const int steps = 200000;
    double acc = 0;
    for (int i = 0; i < steps; ++i) {
        const double t = (i + 0.5) * top / steps;
        double mu = 0;
        for (std::size_t j = 0; j < f.r.size(); ++j)
            if (f.value[j] >= t) mu += (std::pow(f.r[j], f.n) - std::pow(j ? f.r[j - 1] : 0.0, f.n)) / f.n;
        acc += std::pow(t, q - 1) * std::pow(mu, q / p);
    }
    return std::pow(p * acc * top / steps, 1.0 / q);
}

// sup_{rho > 1} rho^{2-n} (rho^2 - 1)^{-1/2} ((rho^n - 1)/n)^{(n-1)/n}: weak-type norm of the
// MT kernel at R = 1, hence a valid constant for |w|_MT <= c_n |w|_{L^{n,1}}
double mt_lorentz_constant(int n) {
    double best = 0;
    for (int i = 1; i <= 200000; ++i) {
        const double rho = 1.0 + 1e-5 * i * i / 2000.0;
        const double v = std::pow(rho, 2 - n) / std::sqrt(rho * rho - 1) *
                         std::pow((std::pow(rho, n) - 1) / n, (n - 1.0) / n);
        best = std::max(best, v);
    }
    return best;
}

} // namespace

TEST_CASE("Lorentz norm of the unit-ball indicator at (n, p, q) = (2, 2, 1) is sqrt 2") {
    CHECK(std::abs(lorentz_radial_norm(indicator(1.0, 2), 2.0, 1.0) - std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("MT norm of the unit-ball indicator is 1") {
    for (int n : {1, 2, 3, 5}) CHECK(std::abs(mt_norm(indicator(1.0, n)) - 1.0) < 1e-10);
}

TEST_CASE("MT norm of a shell chi_(1, rho] is sqrt(rho^2 - 1)") {
    for (double rho : {1.1, 2.0, 5.0}) {
        RadialProfile p;
        p.n = 3;
        p.r = {1.0, rho};
        p.value = {0.0, 1.0};
        CHECK(mt_norm(p) == doctest::Approx(std::sqrt(rho * rho - 1)).epsilon(1e-10));
    }
}

TEST_CASE("L^{p,p} equals L^p on random step profiles") {
    gen::Source g(31);
    for (int t = 0; t < 50; ++t) {
        const RadialProfile f = random_steps(g, g.integer(1, 5));
        const double p = g.uniform(1.0, 6.0);
        const double a = lorentz_radial_norm(f, p, p), b = lp_radial_norm(f, p);
        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, b));
    }
}

TEST_CASE("Lorentz norm agrees with direct quadrature of the distribution function") {
    gen::Source g(32);
    for (int t = 0; t < 6; ++t) {
        const RadialProfile f = random_steps(g, g.integer(1, 4));
        const double p = g.uniform(1.0, 4.0), q = g.uniform(1.0, 4.0);
        CHECK(lorentz_radial_norm(f, p, q) == doctest::Approx(lorentz_quadrature(f, p, q)).epsilon(1e-5));
    }
}

TEST_CASE("Lebesgue radial norm: indicator and scaling") {
    for (int n : {1, 2, 3})
        for (double p : {1.0, 2.0, 3.5}) CHECK(lp_radial_norm(indicator(1.0, n), p) == doctest::Approx(std::pow(n, -1.0 / p)));
    CHECK(lp_radial_norm(indicator(2.0, 3), kInf) == 1.0);
    gen::Source g(33);
    const RadialProfile f = random_steps(g, 3);
    RadialProfile dil = f;
    for (double& r : dil.r) r *= 2.0;
    // |f(./2)|_p = 2^{n/p} |f|_p
    CHECK(lp_radial_norm(dil, 2.0) == doctest::Approx(std::pow(2.0, 1.5) * lp_radial_norm(f, 2.0)));
}

TEST_CASE("MT norm is dominated by c_n times the L^{n,1} norm; sharp for shells when n = 2") {
    gen::Source g(34);
    for (int n : {2, 3}) {
        const double c = mt_lorentz_constant(n);
        if (n == 2) CHECK(c == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
        for (int t = 0; t < 30; ++t) {
            const RadialProfile f = random_steps(g, n);
            CHECK(mt_norm(f) <= c * lorentz_radial_norm(f, n, 1.0) * (1 + 1e-9));
        }
    }
    RadialProfile shell;
    shell.n = 2;
    shell.r = {1.0, 3.0};
    shell.value = {0.0, 1.0};
    CHECK(mt_norm(shell) == doctest::Approx(lorentz_radial_norm(shell, 2.0, 1.0) / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("MT norm is subadditive and positively homogeneous") {
    gen::Source g(35);
    for (int t = 0; t < 20; ++t) {
        RadialProfile f = random_steps(g, 2), h = f;
        for (double& v : h.value) v = g.uniform(0.0, 2.0);
        RadialProfile sum = f;
        for (std::size_t i = 0; i < sum.value.size(); ++i) sum.value[i] += h.value[i];
        CHECK(mt_norm(sum) <= mt_norm(f) + mt_norm(h) + 1e-12);
        RadialProfile twice = f;
        for (double& v : twice.value) v *= 2;
        CHECK(mt_norm(twice) == doctest::Approx(2 * mt_norm(f)).epsilon(1e-12));
    }
}

TEST_CASE("piecewise-linear profiles are refined consistently") {
    RadialProfile lin;
    lin.n = 1;
    lin.interp = Interpolation::piecewise_linear;
    lin.r = {1.0, 2.0};
    lin.value = {1.0, 0.0};
    // f = 1 on (0,1], 2 - r on (1,2]: int f^2 = 1 + 1/3
    CHECK(lp_radial_norm(lin, 2.0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-6));
    const RadialProfile pc = to_piecewise_constant(lin, 1000);
    CHECK(pc.interp == Interpolation::piecewise_constant);
    CHECK(pc.r.back() == 2.0);
}

TEST_CASE("trapezoid lp_norm on a sampled function") {
    std::vector<double> x, f;
    for (int i = 0; i <= 2000; ++i) {
        x.push_back(i / 2000.0);
        f.push_back(x.back());
    }
    CHECK(lp_norm(x, f, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-6));
    CHECK(lp_norm(x, f, kInf) == 1.0);
}

TEST_CASE("profile validation and CSV loading") {
    RadialProfile bad;
    bad.r = {1.0, 0.5};
    bad.value = {1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad.r = {1.0, 2.0};
    bad.value = {1.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    CHECK_THROWS_AS(lorentz_radial_norm(indicator(1, 2), 0.5, 1.0), PreconditionError);

    const std::string path = "test_norms_profile.csv";
    {
        std::ofstream f(path);
        f << "r,value\n0.5,2\n1.0,1\n";
    }
    const RadialProfile p = load_profile_csv(path, 3);
    CHECK(p.r.size() == 2);
    CHECK(p.value[0] == 2.0);
    {
        std::ofstream f(path);
        f << "r,value\n0.5,2\nx,y\n";
    }
    CHECK_THROWS_AS(load_profile_csv(path, 3), PreconditionError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_profile_csv("does/not/exist.csv", 3), PreconditionError);
}
