#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keller/regions.hpp"
#include "keller/rigidity.hpp"

namespace keller {

/// Periodic grid x_j = -L/2 + j h on [-L/2, L/2), h = L/M. Frequencies are stored in DFT order:
/// index k carries xi_k = 2 pi k'/L with k' = k for k < M/2 and k' = k - M otherwise.
struct GridModel {
    double L = 40.0;
    int M = 512;

    void validate() const;  ///< M a power of two >= 16, L > 0
    double h() const { return L / M; }
    std::vector<double> xs() const;
    std::vector<double> freqs() const;
};

/// Unitary DFT matrix F_{k,j} = exp(-i xi_k x_j) / sqrt(M).
ComplexMatrix dft_matrix(const GridModel& g);

/// Dense -i d/dx = F^* diag(xi) F.
ComplexMatrix derivative_matrix(const GridModel& g);

/// Fiber pair (alpha_1, alpha_{n+1}) from the Dirac family of dimension n; the spatial grid
/// stays one-dimensional.
struct Fiber {
    int n = 1;
    ComplexMatrix alpha1;
    ComplexMatrix beta;
};

Fiber fiber(int n);

/// Dense free Dirac operator kron(-i d/dx, alpha_1) + m kron(I, alpha_{n+1}); index = j N + a.
ComplexMatrix dirac_dense(const GridModel& g, const Fiber& f, double m);

/// Operator in Fourier-multiplier form (per-frequency symbol) and/or dense form.
struct DiscreteOperator {
    GridModel grid;
    int fiber_dim = 0;
    std::vector<ComplexMatrix> symbols;  ///< empty when only the dense form exists
    std::optional<ComplexMatrix> dense;

    /// Matrix-vector product through the multiplier form.
    ComplexVector apply_multiplier(const ComplexVector& u) const;
};

/// Absolute spacing from z^2 - m^2 to the discrete free spectrum {xi_k^2} below which the
/// resolvent is refused.
inline constexpr double kResonanceGuard = 1e-8;

/// (D_m - z)^{-1} with symbols (alpha_1 xi + m alpha_{n+1} + z) / (xi^2 + m^2 - z^2).
/// The dense form is assembled from the translation-invariant kernel when `dense` is true.
DiscreteOperator free_dirac_resolvent(const GridModel& g, const Fiber& f, double m, cplx z,
                                      bool dense = true);

/// Periodic kernel of (-d^2/dx^2 - w)^{-1} as a dense M x M matrix.
ComplexMatrix laplace_resolvent(const GridModel& g, cplx w);

struct KernelCheck {
    cplx z;
    double bound = 0;            ///< |z|^{-1/2} / 2
    double sup = 0;              ///< sup over sampled (x, y) of |i e^{i sqrt(z)|x-y|} / (2 sqrt z)|
    double ratio = 0;            ///< sup / bound
    double diagonal_ratio = 0;   ///< value at x = y over bound
};

/// Samples the explicit one-dimensional Laplace resolvent kernel on xs points of [-5, 5]^2.
KernelCheck schrodinger_kernel_bound_check(cplx z, int xs);

/// Scalar profile sampled on the grid.
struct ScalarProfile {
    std::string description;
    std::vector<cplx> values;
    double l1_norm = 0;  ///< h sum |v_j|
};

/// Mini-grammar:
///   gaussian:amp=A,width=W    v(x) = A exp(-x^2 / (2 W^2)) / (W sqrt(2 pi)), so |v|_1 = A
///   step:r0=R,amp=A           v = A on |x| <= R
///   delta:amp=A               v = A / h at the grid point nearest 0
///   file:path.csv             two columns (x, v), linear interpolation, zero outside
/// Throws PreconditionError if |v| >= 1e-10 at either end of the grid.
ScalarProfile parse_profile(const std::string& spec, const GridModel& g);

/// Scales a profile by s.
ScalarProfile scaled(const ScalarProfile& v, double s);

struct BirmanSchwinger {
    ComplexMatrix K;               ///< dense, empty when not assembled
    double norm = 0;               ///< spectral norm of K
    double factorized_norm = 0;    ///< |a R_0 b~| |m A alpha_{n+1} B^* + z A B^*|
    double factorized_deviation = 0;  ///< |K - factorized|_F / |K|_F, or absolute when K ~ 0
    bool deviation_is_absolute = false;
    ComplexMatrix fiber_factor;    ///< m A alpha_{n+1} B^* + z A B^*
};

/// K_z = diag(a) A (D_m - z)^{-1} B^* diag(b~) with a = |v|^{1/2}, b~ = v / |v|^{1/2}.
/// With dense = false only the factorized form is evaluated. Throws if the potential is not
/// rigid to 1e-10.
BirmanSchwinger birman_schwinger(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                 double m, cplx z, bool dense = true);

enum class FilterTag { kept, free_spectrum, delocalized };
std::string to_string(FilterTag t);

struct SpectrumOptions {
    std::optional<double> tol_ess;  ///< default 5 * 2 pi / L
    double tol_im = 1e-6;
    double tail_fraction = 0.25;    ///< mass in |x| > L/4 above which an eigenvector is delocalized
};

struct EigenEntry {
    cplx z;
    FilterTag tag = FilterTag::kept;
    double free_distance = 0;  ///< distance to the discrete free spectrum
    double tail_mass = 0;
    double margin = 0;         ///< (rhs - lhs) / rhs of the enclosure inequality; kept entries only
    bool violates = false;
};

struct EnclosureCheckReport {
    std::vector<EigenEntry> eigenvalues;
    EnclosureSpec spec;
    double tol_ess = 0;
    double tol_im = 0;
    double tail_fraction = 0;
    int kept = 0;
    int violations = 0;
};

/// Dense eigensolve of D_m + kron(diag(v), B^* A), filtered and checked against `spec`
/// (whose norm_value is replaced by |v|_1). Requires M N <= 8192.
EnclosureCheckReport perturbed_spectrum(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                        double m, EnclosureSpec spec, const SpectrumOptions& opt = {});

struct SweepPoint {
    cplx z;
    double bs_norm = 0;
    double kappa_bound = 0;  ///< kappa(z) |v|_1 for n = 1, r = 1; nan when undefined
    bool ok = true;
    std::string error;
};

/// Points of the rectangle [re0, re1] x [im0, im1] with nre x nim samples, row-major in im.
std::vector<cplx> z_rectangle(double re0, double re1, double im0, double im1, int nre, int nim);

/// |K_z| at each z via the factorized form; failed points are marked, not fatal.
/// OpenMP over points.
std::vector<SweepPoint> bs_norm_sweep(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                      double m, const std::vector<cplx>& zs);

/// Serial reference for bs_norm_sweep.
std::vector<SweepPoint> bs_norm_sweep_serial(const GridModel& g, const RigidPotential& pot,
                                             const ScalarProfile& v, double m, const std::vector<cplx>& zs);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace keller
