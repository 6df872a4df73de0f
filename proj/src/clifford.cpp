#include "keller/clifford.hpp"

#include <algorithm>

#include "keller/matrix.hpp"

namespace keller {

namespace {

void check_dimension(int n, int max_n) {
    require(n >= 1, "dirac_matrices: dimension must be >= 1");
    if (n > max_n)
        throw PreconditionError("dirac_matrices: n = " + std::to_string(n) +
                                " exceeds the dense storage cap n <= " + std::to_string(max_n));
}

ComplexMatrix eye(Eigen::Index k) { return ComplexMatrix::Identity(k, k); }

// Off-diagonal blocks; throws if alpha is not of the form [[0, b], [b^*, 0]].
ComplexMatrix extract_beta(const ComplexMatrix& alpha) {
    const Eigen::Index h = alpha.rows() / 2;
    const ComplexMatrix b = alpha.topRightCorner(h, h);
    const double dev = std::max({alpha.topLeftCorner(h, h).cwiseAbs().maxCoeff(),
                                 alpha.bottomRightCorner(h, h).cwiseAbs().maxCoeff(),
                                 (alpha.bottomLeftCorner(h, h) - b.adjoint()).cwiseAbs().maxCoeff()});
    if (dev > 1e-14) throw NumericalError("dirac_matrices: off-diagonal block structure violated");
    return b;
}

void fill_betas(DiracRep& rep) {
    rep.betas.clear();
    for (int k = 0; k < rep.n; ++k) rep.betas.push_back(extract_beta(rep.alphas[k]));
}

std::vector<ComplexMatrix> recursive_alphas(int n) {
    if (n == 1) return {pauli(1), pauli(3)};
    if (n == 2) return {pauli(1), pauli(2), pauli(3)};
    const Eigen::Index half = dirac_size(n) / 2;
    std::vector<ComplexMatrix> out;
    if (n % 2 == 1) {
        for (const auto& a : recursive_alphas(n - 1)) out.push_back(kron(pauli(1), a));
    } else {
        out.push_back(kron(pauli(1), eye(half)));
        for (const auto& a : recursive_alphas(n - 2)) out.push_back(kron(pauli(2), a));
    }
    out.push_back(kron(pauli(3), eye(half)));
    return out;
}

// alpha_k for even n as a word sigma_2^{a} (x) s (x) I_2^{b}.
ComplexMatrix even_closed_form(int n, int k) {
    const int h = n / 2;
    if (k <= h) return kron_all({kron_pow(pauli(2), k - 1), pauli(1), kron_pow(pauli(0), h - k)});
    if (k == h + 1) return kron_pow(pauli(2), h);
    return kron_all({kron_pow(pauli(2), n + 1 - k), pauli(3), kron_pow(pauli(0), k - h - 2)});
}

} // namespace

Eigen::Index dirac_size(int n) { return Eigen::Index{1} << ((n + 1) / 2); }

DiracRep dirac_matrices(int n, int max_n) {
    check_dimension(n, max_n);
    DiracRep rep;
    rep.n = n;
    rep.N = dirac_size(n);
    rep.alphas = recursive_alphas(n);
    fill_betas(rep);
    return rep;
}

DiracRep dirac_matrices_closed_form(int n, int max_n) {
    check_dimension(n, max_n);
    DiracRep rep;
    rep.n = n;
    rep.N = dirac_size(n);
    if (n % 2 == 0) {
        for (int k = 1; k <= n + 1; ++k) rep.alphas.push_back(even_closed_form(n, k));
    } else {
        for (int k = 1; k <= n; ++k)
            rep.alphas.push_back(n == 1 ? pauli(1) : kron(pauli(1), even_closed_form(n - 1, k)));
        rep.alphas.push_back(kron(pauli(3), kron_pow(pauli(0), (n - 1) / 2)));
    }
    fill_betas(rep);
    return rep;
}

ComplexMatrix alpha_tilde(const DiracRep& rep) {
    ComplexMatrix prod = ComplexMatrix::Identity(rep.N, rep.N);
    for (const auto& a : rep.alphas) prod = prod * a;
    return std::pow(-I_unit, rep.n / 2) * prod;
}

bool CliffordReport::passed(double tol_clifford, double tol_tilde) const {
    return hermiticity < tol_clifford && anticommutator < tol_clifford &&
           mass_block == 0.0 && beta_relation < tol_clifford && closed_form == 0.0 &&
           tilde_closed_form < tol_tilde && tilde_square < tol_tilde &&
           tilde_adjoint < tol_tilde && tilde_commutation < tol_tilde;
}

CliffordReport check_clifford(const DiracRep& rep) {
    CliffordReport r;
    r.n = rep.n;
    const Eigen::Index N = rep.N, h = N / 2;
    const int K = rep.n + 1;
    for (int j = 0; j < K; ++j) {
        r.hermiticity = std::max(r.hermiticity, max_abs_diff(rep.alphas[j], rep.alphas[j].adjoint()));
        for (int k = 0; k < K; ++k) {
            const ComplexMatrix target = (j == k ? 2.0 : 0.0) * eye(N);
            r.anticommutator = std::max(
                r.anticommutator,
                max_abs_diff(rep.alphas[j] * rep.alphas[k] + rep.alphas[k] * rep.alphas[j], target));
        }
    }
    ComplexMatrix mass = ComplexMatrix::Zero(N, N);
    mass.topLeftCorner(h, h) = eye(h);
    mass.bottomRightCorner(h, h) = -eye(h);
    r.mass_block = max_abs_diff(rep.alphas.back(), mass);
    for (std::size_t j = 0; j < rep.betas.size(); ++j)
        for (std::size_t k = 0; k < rep.betas.size(); ++k) {
            const ComplexMatrix target = (j == k ? 2.0 : 0.0) * eye(h);
            const auto& bj = rep.betas[j];
            const auto& bk = rep.betas[k];
            r.beta_relation = std::max(
                r.beta_relation, max_abs_diff(bk * bj.adjoint() + bj * bk.adjoint(), target));
        }

    const ComplexMatrix at = alpha_tilde(rep);
    const ComplexMatrix expected = rep.n % 2 ? ComplexMatrix(kron(-I_unit * pauli(2), eye(h))) : eye(N);
    const double sign = rep.n % 2 ? -1.0 : 1.0;
    r.tilde_closed_form = max_abs_diff(at, expected);
    r.tilde_square = max_abs_diff(at * at, sign * eye(N));
    r.tilde_adjoint = max_abs_diff(at.adjoint(), sign * at);
    for (const auto& a : rep.alphas)
        r.tilde_commutation = std::max(r.tilde_commutation, max_abs_diff(a * at, sign * (at * a)));

    const DiracRep closed = dirac_matrices_closed_form(rep.n, std::max(rep.n, kDefaultMaxDimension));
    for (int k = 0; k < K; ++k)
        r.closed_form = std::max(r.closed_form, max_abs_diff(rep.alphas[k], closed.alphas[k]));
    return r;
}

bool RecursionReport::passed() const {
    return std::all_of(branch_deviation.begin(), branch_deviation.end(),
                       [](double d) { return d == 0.0; });
}

RecursionReport recursion_check(int n, int m) {
    require(m >= 2 && m <= n && (n - m) % 2 == 0,
            "recursion_check: requires 2 <= m <= n with n - m even");
    const DiracRep big = dirac_matrices(n, std::max(n, kDefaultMaxDimension));
    const DiracRep small = dirac_matrices(m, std::max(m, kDefaultMaxDimension));
    const int d = n - m;
    std::vector<ComplexMatrix> rest;  // alpha^(n-m); the 0-dimensional set is {[1]}
    if (d == 0)
        rest.push_back(eye(1));
    else
        rest = dirac_matrices(d, std::max(d, kDefaultMaxDimension)).alphas;
    const ComplexMatrix pad = kron_pow(pauli(0), d / 2);
    const int h = m / 2;

    RecursionReport r;
    r.n = n;
    r.m = m;
    for (int k = 1; k <= n + 1; ++k) {
        int branch;
        ComplexMatrix composed;
        if (k <= h) {
            branch = 0;
            composed = kron(small.alphas[k - 1], pad);
        } else if (k <= d + h + 1) {
            branch = 1;
            composed = kron(small.alphas[h], rest[k - h - 1]);
        } else {
            branch = 2;
            composed = kron(small.alphas[k - d - 1], pad);
        }
        r.branch_deviation[branch] =
            std::max(r.branch_deviation[branch], max_abs_diff(big.alphas[k - 1], composed));
        ++r.branch_count[branch];
    }
    return r;
}

} // namespace keller
