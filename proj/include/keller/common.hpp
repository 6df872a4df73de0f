#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#ifndef KELLER_VERSION
#define KELLER_VERSION "0.0.0"
#endif

namespace keller {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad shape, out-of-range parameter).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not deliver a trustworthy answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The point or parameter lies on a singular locus of the formula being evaluated.
class SingularPointError : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace keller
