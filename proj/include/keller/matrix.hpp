#pragma once

#include <vector>

#include "keller/common.hpp"

namespace keller {

/// Pauli matrix sigma_k for k in {0,1,2,3}; sigma_0 is the 2x2 identity.
ComplexMatrix pauli(int k);

/// Kronecker product a (x) b; the row index of the result is (i_a * rows(b) + i_b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Left fold of kron over a non-empty list.
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

/// k-fold Kronecker power; k == 0 yields the 1x1 identity.
ComplexMatrix kron_pow(const ComplexMatrix& m, int k);

/// Largest singular value; 0 for an empty or zero matrix.
double spectral_norm(const ComplexMatrix& m);

/// Orthonormal basis (columns) of ker m. Singular values <= tol * max(1, sigma_max) count as zero.
ComplexMatrix nullspace(const ComplexMatrix& m, double tol = 1e-10);

struct EigenDecomposition {
    ComplexVector values;
    ComplexMatrix vectors;  ///< right eigenvectors, unit 2-norm columns
};

/// All eigenvalues of a square matrix (nonsymmetric QR via LAPACK zgeev).
ComplexVector eigenvalues(const ComplexMatrix& m);

/// Eigenvalues and right eigenvectors of a square matrix.
EigenDecomposition eigen_decompose(const ComplexMatrix& m);

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Throws PreconditionError if m is not Hermitian within tol*max(1,|m|) or has an
/// eigenvalue below -tol*max(1,|m|); small negative eigenvalues are clamped to 0.
ComplexMatrix herm_sqrt(const ComplexMatrix& m, double tol = 1e-10);

/// max |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace keller
