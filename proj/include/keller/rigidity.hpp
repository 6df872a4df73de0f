#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keller/clifford.hpp"

namespace keller {

enum class RaClass { i, ii, iii, iv };

std::string to_string(RaClass c);
RaClass parse_ra_class(const std::string& s);  ///< accepts "i".."iv", case-insensitive

/// rho^k_sign and tau^k_sign; k in {0, 2, 3}. sign is +1 or -1.
struct BrickPair {
    int k = 0;
    int sign = 1;
    ComplexMatrix rho;
    ComplexMatrix tau;
};

BrickPair brick(int k, int sign);

/// V = B^* A. ra_class is empty for a general (unclassified) potential.
struct RigidPotential {
    int n = 0;
    std::optional<RaClass> ra_class;
    int sign = 1;
    ComplexMatrix A;
    ComplexMatrix B;
    ComplexMatrix V;
};

/// True when an explicit rigid potential of class c exists in dimension n.
bool ra_admissible(RaClass c, int n);

/// Explicit family of class c in dimension n, lifted by tensoring identities and
/// normalized to |A| = |B| = 1. Throws PreconditionError for inadmissible pairs.
RigidPotential example(RaClass c, int n, int sign);

struct RAReport {
    double residual = 0;          ///< max_{k<=n} |A alpha_k B^*|_max
    double mass_product = 0;      ///< |A alpha_{n+1} B^*|_max
    double ab_product = 0;        ///< |A B^*|_max
    double v_size = 0;            ///< |B^* A|_max
    bool mass_zero = false;
    bool ab_zero = false;
    bool v_nonzero = false;
    std::optional<RaClass> inferred;  ///< empty means "none"
    double norm_deviation_a = 0;  ///< |A| - 1
    double norm_deviation_b = 0;  ///< |B| - 1
};

/// Classifies (A, B) against the rigidity conditions. Quantities at or below tol count as zero;
/// a residual above tol on any k <= n yields "none".
RAReport verify(const ComplexMatrix& A, const ComplexMatrix& B, const DiracRep& rep,
                double tol = 1e-10);

struct PolarSplit {
    ComplexMatrix A;  ///< sqrt(W)
    ComplexMatrix B;  ///< sqrt(W) U^*
    ComplexMatrix W;  ///< sqrt(V^* V)
    ComplexMatrix U;  ///< partial isometry, V = U W
};

/// B^* A = V for any square V; U acts as an isometry on ran(W) and vanishes on ker(W).
PolarSplit polar_split(const ComplexMatrix& V, double rank_tol = 1e-12);

/// A (x) M and B (x) M^{-1}; M must be an invertible 2x2 matrix.
std::pair<ComplexMatrix, ComplexMatrix> lift_pair(const ComplexMatrix& A, const ComplexMatrix& B,
                                                  const ComplexMatrix& M);

struct ProbeReport {
    RaClass ra_class = RaClass::i;
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    int counterexamples = 0;
    std::vector<int> nullspace_dims;  ///< one entry per trial
    std::vector<int> b_ranks;         ///< rank of the sampled B per trial
};

/// True for the (class, n) pairs covered by a non-existence claim.
bool probe_supported(RaClass c, int n);

/// Nullspace of the linear constraints on A forced by class c for a fixed B, as columns of
/// vec(A) (column-major). The class's nonzero requirements are not imposed.
ComplexMatrix constraint_nullspace(RaClass c, const DiracRep& rep, const ComplexMatrix& B);

/// True if some A in span(basis) meets every nonzero requirement of class c
/// (B^*A != 0, plus A alpha_{n+1} B^* != 0 or AB^* != 0 as the class demands).
bool nullspace_admits_class(RaClass c, const DiracRep& rep, const ComplexMatrix& B,
                            const ComplexMatrix& basis, double tol = 1e-9);

/// Randomized check that no (A, B) of class c exists in dimension n. Trial t draws B from a
/// generator seeded by (seed, t), cycling through three families by t mod 3: a full complex
/// Gaussian matrix, a rank-r product of Gaussian N x r and r x N factors, and a Kronecker word
/// of random tau bricks and Gaussian 2 x 2 factors. OpenMP over trials.
ProbeReport nonexistence_probe(RaClass c, int n, int trials, std::uint64_t seed);

/// Serial reference for nonexistence_probe; identical output for identical arguments.
ProbeReport nonexistence_probe_serial(RaClass c, int n, int trials, std::uint64_t seed);

/// Trial-indexed standard complex Gaussian matrix; deterministic in (seed, stream).
ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                              std::uint64_t stream);

} // namespace keller
