#include "keller/rigidity.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <random>

#include "keller/matrix.hpp"

namespace keller {

std::string to_string(RaClass c) {
    switch (c) {
    case RaClass::i: return "i";
    case RaClass::ii: return "ii";
    case RaClass::iii: return "iii";
    case RaClass::iv: return "iv";
    }
    return "?";
}

RaClass parse_ra_class(const std::string& s) {
    std::string t;
    for (char ch : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (t == "i") return RaClass::i;
    if (t == "ii") return RaClass::ii;
    if (t == "iii") return RaClass::iii;
    if (t == "iv") return RaClass::iv;
    throw PreconditionError("unknown rigidity class '" + s + "' (expected i, ii, iii or iv)");
}

BrickPair brick(int k, int sign) {
    require(sign == 1 || sign == -1, "brick: sign must be +1 or -1");
    const double s = sign;
    BrickPair b;
    b.k = k;
    b.sign = sign;
    switch (k) {
    case 0: {
        const ComplexMatrix p = 0.5 * (pauli(2) + I_unit * pauli(3));
        const ComplexMatrix q = 0.5 * (pauli(0) + pauli(1));
        b.rho = sign > 0 ? p : q;
        b.tau = sign > 0 ? q : p;
        break;
    }
    case 2:
        b.rho = 0.5 * (pauli(1) - s * I_unit * pauli(2));
        b.tau = b.rho;
        break;
    case 3:
        b.rho = 0.5 * (pauli(0) + s * pauli(2));
        b.tau = b.rho;
        break;
    default: throw PreconditionError("brick: tag must be 0, 2 or 3");
    }
    return b;
}

bool ra_admissible(RaClass c, int n) {
    if (n < 1) return false;
    switch (c) {
    case RaClass::i: return true;
    case RaClass::ii:
    case RaClass::iii: return n % 2 == 1 || n >= 6;
    case RaClass::iv: return n >= 3;
    }
    return false;
}

namespace {

ComplexMatrix eye(Eigen::Index k) { return ComplexMatrix::Identity(k, k); }

// [[X, Y], [X, Y]]
ComplexMatrix stacked_row(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix row(x.rows(), x.cols() + y.cols());
    row << x, y;
    ComplexMatrix out(2 * row.rows(), row.cols());
    out << row, row;
    return out;
}

} // namespace

RigidPotential example(RaClass c, int n, int sign) {
    require(sign == 1 || sign == -1, "example: sign must be +1 or -1");
    require(n >= 1, "example: dimension must be >= 1");
    if (!ra_admissible(c, n))
        throw PreconditionError("no potential of class RA(" + to_string(c) +
                                ") exists in dimension n = " + std::to_string(n));
    const Eigen::Index N = dirac_size(n);
    RigidPotential p;
    p.n = n;
    p.ra_class = c;
    p.sign = sign;

    if (c == RaClass::iv) {
        const BrickPair first = brick(n % 2 ? 0 : 2, sign);
        const BrickPair second = brick(0, sign);
        p.A = kron_all({first.rho, second.rho, eye(N / 4)});
        p.B = kron_all({first.tau, second.tau, eye(N / 4)});
    } else if (n % 2 == 1 || c == RaClass::i) {
        const int k = c == RaClass::i ? 2 : (c == RaClass::ii ? 0 : 3);
        const BrickPair b = brick(k, sign);
        p.A = kron(b.rho, eye(N / 2));
        p.B = kron(b.tau, eye(N / 2));
    } else {
        const BrickPair b = brick(3, sign);
        const ComplexMatrix at = kron(b.rho, b.rho);
        const ComplexMatrix bt = kron(b.tau, b.tau);
        const ComplexMatrix S = kron(pauli(1), pauli(1));
        const double s = c == RaClass::ii ? -1.0 : 1.0;
        p.A = kron(0.5 * stacked_row(at, s * at * S), eye(N / 8));
        p.B = kron(0.5 * stacked_row(bt, bt * S), eye(N / 8));
    }
    p.A /= spectral_norm(p.A);
    p.B /= spectral_norm(p.B);
    p.V = p.B.adjoint() * p.A;
    return p;
}

RAReport verify(const ComplexMatrix& A, const ComplexMatrix& B, const DiracRep& rep, double tol) {
    require(A.rows() == rep.N && A.cols() == rep.N && B.rows() == rep.N && B.cols() == rep.N,
            "verify: A and B must be N x N with N = " + std::to_string(rep.N));
    auto maxabs = [](const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; };
    const ComplexMatrix Bs = B.adjoint();
    RAReport r;
    for (int k = 0; k < rep.n; ++k) r.residual = std::max(r.residual, maxabs(A * rep.alphas[k] * Bs));
    r.mass_product = maxabs(A * rep.alphas.back() * Bs);
    r.ab_product = maxabs(A * Bs);
    r.v_size = maxabs(Bs * A);
    r.mass_zero = r.mass_product <= tol;
    r.ab_zero = r.ab_product <= tol;
    r.v_nonzero = r.v_size > tol;
    r.norm_deviation_a = spectral_norm(A) - 1.0;
    r.norm_deviation_b = spectral_norm(B) - 1.0;
    if (r.residual <= tol && r.v_nonzero) {
        if (!r.mass_zero && !r.ab_zero) r.inferred = RaClass::i;
        else if (!r.mass_zero) r.inferred = RaClass::ii;
        else if (!r.ab_zero) r.inferred = RaClass::iii;
        else r.inferred = RaClass::iv;
    }
    return r;
}

PolarSplit polar_split(const ComplexMatrix& V, double rank_tol) {
    require(V.rows() == V.cols(), "polar_split: V must be square");
    Eigen::JacobiSVD<ComplexMatrix> svd(V, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const ComplexMatrix& U = svd.matrixU();
    const ComplexMatrix& W = svd.matrixV();
    Eigen::Index rank = 0;
    const double cut = rank_tol * std::max(1.0, s.size() ? s(0) : 0.0);
    while (rank < s.size() && s(rank) > cut) ++rank;

    PolarSplit out;
    out.W = W * s.cast<cplx>().asDiagonal() * W.adjoint();
    out.A = W * s.cwiseSqrt().cast<cplx>().asDiagonal() * W.adjoint();
    out.U = U.leftCols(rank) * W.leftCols(rank).adjoint();
    out.B = out.A * out.U.adjoint();
    return out;
}

std::pair<ComplexMatrix, ComplexMatrix> lift_pair(const ComplexMatrix& A, const ComplexMatrix& B,
                                                  const ComplexMatrix& M) {
    require(M.rows() == 2 && M.cols() == 2, "lift_pair: M must be 2 x 2");
    const cplx det = M.determinant();
    require(std::abs(det) > 1e-12 * std::max(1.0, M.squaredNorm()), "lift_pair: M is singular");
    return {kron(A, M), kron(B, ComplexMatrix(M.inverse()))};
}

bool probe_supported(RaClass c, int n) {
    switch (c) {
    case RaClass::iv: return n == 1 || n == 2;
    case RaClass::ii:
    case RaClass::iii: return n == 2 || n == 4;
    case RaClass::i: return false;
    }
    return false;
}

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                              std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = gauss(gen);
            m(i, j) = cplx(re, gauss(gen));
        }
    return m;
}

namespace {

std::vector<ComplexMatrix> constraint_factors(RaClass c, const DiracRep& rep) {
    std::vector<ComplexMatrix> xs(rep.alphas.begin(), rep.alphas.begin() + rep.n);
    if (c == RaClass::ii || c == RaClass::iv) xs.push_back(eye(rep.N));
    if (c == RaClass::iii || c == RaClass::iv) xs.push_back(rep.alphas.back());
    return xs;
}

// Trial B: full Gaussian, low-rank Gaussian, or a Kronecker word of brick/Gaussian 2x2 factors.
ComplexMatrix probe_matrix(const DiracRep& rep, int trial, std::uint64_t seed) {
    const Eigen::Index N = rep.N;
    const auto t = static_cast<std::uint64_t>(trial);
    switch (trial % 3) {
    case 0: return gaussian_matrix(N, N, seed, 4 * t);
    case 1: {
        const Eigen::Index r = 1 + (trial / 3) % N;
        return gaussian_matrix(N, r, seed, 4 * t) * gaussian_matrix(r, N, seed, 4 * t + 1);
    }
    default: {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(t), 7u};
        std::mt19937_64 gen(seq);
        std::uniform_int_distribution<int> pick(0, 6);
        ComplexMatrix out = ComplexMatrix::Identity(1, 1);
        for (Eigen::Index d = 1; d < N; d *= 2) {
            const int choice = pick(gen);
            ComplexMatrix f;
            if (choice == 6) {
                f = gaussian_matrix(2, 2, seed, 4 * t + 2 + static_cast<std::uint64_t>(d));
            } else {
                static constexpr std::array<int, 3> tags{0, 2, 3};
                const BrickPair b = brick(tags[choice % 3], choice < 3 ? 1 : -1);
                f = b.tau;
            }
            out = kron(out, f);
        }
        return out;
    }
    }
}

bool probe_trial(RaClass c, const DiracRep& rep, int trial, std::uint64_t seed, int& dim) {
    const ComplexMatrix B = probe_matrix(rep, trial, seed);
    const ComplexMatrix basis = constraint_nullspace(c, rep, B);
    dim = static_cast<int>(basis.cols());
    return nullspace_admits_class(c, rep, B, basis);
}

ProbeReport probe_header(RaClass c, int n, int trials, std::uint64_t seed) {
    if (!probe_supported(c, n))
        throw PreconditionError("nonexistence_probe: no impossibility claim for RA(" + to_string(c) +
                                ") in dimension " + std::to_string(n));
    require(trials >= 0, "nonexistence_probe: trials must be >= 0");
    ProbeReport r;
    r.ra_class = c;
    r.n = n;
    r.trials = trials;
    r.seed = seed;
    r.nullspace_dims.assign(static_cast<std::size_t>(trials), 0);
    r.b_ranks.assign(static_cast<std::size_t>(trials), 0);
    return r;
}

int probe_rank(const DiracRep& rep, int trial, std::uint64_t seed) {
    const ComplexMatrix B = probe_matrix(rep, trial, seed);
    return static_cast<int>(rep.N - nullspace(B, 1e-10).cols());
}

} // namespace

ComplexMatrix constraint_nullspace(RaClass c, const DiracRep& rep, const ComplexMatrix& B) {
    require(B.rows() == rep.N && B.cols() == rep.N, "constraint_nullspace: B shape mismatch");
    const Eigen::Index N = rep.N, N2 = N * N;
    const auto xs = constraint_factors(c, rep);
    ComplexMatrix L(static_cast<Eigen::Index>(xs.size()) * N2, N2);
    // vec(A C) = (C^T (x) I) vec(A) with column-major vec
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const ComplexMatrix C = xs[i] * B.adjoint();
        L.middleRows(static_cast<Eigen::Index>(i) * N2, N2) = kron(C.transpose(), eye(N));
    }
    return nullspace(L, 1e-10);
}

bool nullspace_admits_class(RaClass c, const DiracRep& rep, const ComplexMatrix& B,
                            const ComplexMatrix& basis, double tol) {
    const Eigen::Index N = rep.N;
    const double scale = tol * std::max(1.0, spectral_norm(B));
    bool v_nonzero = false, mass_nonzero = false, ab_nonzero = false;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        const ComplexMatrix A = basis.col(j).reshaped(N, N);
        v_nonzero |= spectral_norm(B.adjoint() * A) > scale;
        mass_nonzero |= spectral_norm(A * rep.alphas.back() * B.adjoint()) > scale;
        ab_nonzero |= spectral_norm(A * B.adjoint()) > scale;
    }
    // A generic element of the span avoids the (proper) zero sets of each nonzero requirement.
    switch (c) {
    case RaClass::i: return v_nonzero && mass_nonzero && ab_nonzero;
    case RaClass::ii: return v_nonzero && mass_nonzero;
    case RaClass::iii: return v_nonzero && ab_nonzero;
    case RaClass::iv: return v_nonzero;
    }
    return false;
}

ProbeReport nonexistence_probe(RaClass c, int n, int trials, std::uint64_t seed) {
    ProbeReport r = probe_header(c, n, trials, seed);
    const DiracRep rep = dirac_matrices(n);
    int found = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : found)
    for (int t = 0; t < trials; ++t) {
        int dim = 0;
        if (probe_trial(c, rep, t, seed, dim)) ++found;
        r.nullspace_dims[static_cast<std::size_t>(t)] = dim;
        r.b_ranks[static_cast<std::size_t>(t)] = probe_rank(rep, t, seed);
    }
    r.counterexamples = found;
    return r;
}

ProbeReport nonexistence_probe_serial(RaClass c, int n, int trials, std::uint64_t seed) {
    ProbeReport r = probe_header(c, n, trials, seed);
    const DiracRep rep = dirac_matrices(n);
    for (int t = 0; t < trials; ++t) {
        int dim = 0;
        if (probe_trial(c, rep, t, seed, dim)) ++r.counterexamples;
        r.nullspace_dims[static_cast<std::size_t>(t)] = dim;
        r.b_ranks[static_cast<std::size_t>(t)] = probe_rank(rep, t, seed);
    }
    return r;
}

} // namespace keller
