#pragma once

#include <array>
#include <vector>

#include "keller/common.hpp"

namespace keller {

inline constexpr int kDefaultMaxDimension = 20;

/// Dirac matrices alpha_1..alpha_{n+1} of size N = 2^ceil(n/2).
/// alphas[k-1] holds alpha_k. Each alpha_k with k <= n is off-diagonal,
/// alpha_k = [[0, beta_k], [beta_k^*, 0]], and betas[k-1] holds beta_k.
struct DiracRep {
    int n = 0;
    Eigen::Index N = 0;
    std::vector<ComplexMatrix> alphas;
    std::vector<ComplexMatrix> betas;
};

/// 2^ceil(n/2).
Eigen::Index dirac_size(int n);

/// Recursive construction: sigma_1 (x) alpha^(n-1) for odd n; sigma_1 (x) I,
/// sigma_2 (x) alpha^(n-2), sigma_3 (x) I for even n.
DiracRep dirac_matrices(int n, int max_n = kDefaultMaxDimension);

/// Closed-form Kronecker words in sigma_1, sigma_2, sigma_3 and I_2; must equal dirac_matrices(n).
DiracRep dirac_matrices_closed_form(int n, int max_n = kDefaultMaxDimension);

/// (-i)^floor(n/2) * alpha_1 * ... * alpha_{n+1}.
ComplexMatrix alpha_tilde(const DiracRep& rep);

struct CliffordReport {
    int n = 0;
    double hermiticity = 0;      ///< max_k max|alpha_k - alpha_k^*|
    double anticommutator = 0;   ///< max_{j,k} max|{alpha_j,alpha_k} - 2 delta I|
    double mass_block = 0;       ///< max|alpha_{n+1} - diag(I,-I)|
    double beta_relation = 0;    ///< max_{j,k} max|beta_k beta_j^* + beta_j beta_k^* - 2 delta I|
    double tilde_closed_form = 0;  ///< alpha_tilde vs -i sigma_2 (x) I (odd) or I (even)
    double tilde_square = 0;
    double tilde_adjoint = 0;
    double tilde_commutation = 0;
    double closed_form = 0;      ///< recursive vs closed-form construction

    bool passed(double tol_clifford = 1e-14, double tol_tilde = 1e-13) const;
};

CliffordReport check_clifford(const DiracRep& rep);

struct RecursionReport {
    int n = 0;
    int m = 0;
    std::array<double, 3> branch_deviation{};  ///< max entrywise deviation per branch
    std::array<int, 3> branch_count{};         ///< number of indices k in each branch
    bool passed() const;
};

/// Cross-dimension identity between the n- and m-dimensional representations.
/// Requires 2 <= m <= n and n - m even; for n == m the middle branch uses the
/// 0-dimensional representation alpha_1^(0) = [1].
RecursionReport recursion_check(int n, int m);

} // namespace keller
