#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "keller/common.hpp"

namespace gen {

class Source {
public:
    explicit Source(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    keller::cplx complex() {
        std::normal_distribution<double> g(0.0, 1.0);
        return {g(rng_), g(rng_)};
    }

    keller::ComplexMatrix matrix(Eigen::Index r, Eigen::Index c) {
        keller::ComplexMatrix m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = complex();
        return m;
    }

    keller::ComplexMatrix hermitian(Eigen::Index n) {
        const keller::ComplexMatrix m = matrix(n, n);
        return 0.5 * (m + m.adjoint());
    }

    // rejection keeps |det M| >= 0.1 |M|_F^2, so M is well conditioned
    keller::ComplexMatrix invertible2() {
        for (;;) {
            const keller::ComplexMatrix m = matrix(2, 2);
            if (std::abs(m.determinant()) > 0.2 * m.squaredNorm() / 2) return m;
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace gen
