#include "keller/lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "keller/matrix.hpp"

namespace keller {

void GridModel::validate() const {
    require(std::isfinite(L) && L > 0.0, "GridModel: length must be positive");
    require(M >= 16 && (M & (M - 1)) == 0, "GridModel: M must be a power of two >= 16");
}

std::vector<double> GridModel::xs() const {
    std::vector<double> x(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) x[static_cast<std::size_t>(j)] = -0.5 * L + j * h();
    return x;
}

std::vector<double> GridModel::freqs() const {
    std::vector<double> xi(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) xi[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * (k < M / 2 ? k : k - M) / L;
    return xi;
}

ComplexMatrix dft_matrix(const GridModel& g) {
    g.validate();
    const auto x = g.xs();
    const auto xi = g.freqs();
    ComplexMatrix F(g.M, g.M);
    const double s = 1.0 / std::sqrt(static_cast<double>(g.M));
    for (int k = 0; k < g.M; ++k)
        for (int j = 0; j < g.M; ++j) F(k, j) = s * std::polar(1.0, -xi[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)]);
    return F;
}

ComplexMatrix derivative_matrix(const GridModel& g) {
    const ComplexMatrix F = dft_matrix(g);
    const auto xi = g.freqs();
    Eigen::VectorXcd d(g.M);
    for (int k = 0; k < g.M; ++k) d(k) = xi[static_cast<std::size_t>(k)];
    return F.adjoint() * d.asDiagonal() * F;
}

Fiber fiber(int n) {
    const DiracRep rep = dirac_matrices(n);
    return {n, rep.alphas.front(), rep.alphas.back()};
}

ComplexMatrix dirac_dense(const GridModel& g, const Fiber& f, double m) {
    return kron(derivative_matrix(g), f.alpha1) +
           m * kron(ComplexMatrix::Identity(g.M, g.M), f.beta);
}

ComplexVector DiscreteOperator::apply_multiplier(const ComplexVector& u) const {
    require(!symbols.empty(), "apply_multiplier: operator has no multiplier form");
    const int M = grid.M, N = fiber_dim;
    require(u.size() == static_cast<Eigen::Index>(M) * N, "apply_multiplier: size mismatch");
    const ComplexMatrix F = dft_matrix(grid);
    // columns of U are grid points; rows are fiber components
    const Eigen::Map<const ComplexMatrix> U(u.data(), N, M);
    ComplexMatrix Uhat = U * F.transpose();
    for (int k = 0; k < M; ++k) Uhat.col(k) = symbols[static_cast<std::size_t>(k)] * Uhat.col(k);
    const ComplexMatrix out = Uhat * F.conjugate();
    return Eigen::Map<const ComplexVector>(out.data(), out.size());
}

namespace {

void guard_resonance(const GridModel& g, cplx w) {
    for (double xi : g.freqs())
        if (std::abs(w - xi * xi) <= kResonanceGuard)
            throw SingularPointError("resolvent: z^2 - m^2 is within 1e-8 of the grid frequency xi^2 = " +
                                     std::to_string(xi * xi));
}

// g0(d) = (1/M) sum_k e^{i xi_k d h} / (xi_k^2 - w), g1 likewise with an extra xi_k
struct Kernels {
    std::vector<cplx> g0, g1;
};

Kernels periodic_kernels(const GridModel& g, cplx w, bool with_g1) {
    const auto xi = g.freqs();
    const int M = g.M;
    std::vector<cplx> c(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) c[static_cast<std::size_t>(k)] = 1.0 / (xi[static_cast<std::size_t>(k)] * xi[static_cast<std::size_t>(k)] - w);
    // e^{i xi_k d h} = e^{2 pi i k' d / M}; the phase table is indexed by (k d) mod M
    std::vector<cplx> phase(static_cast<std::size_t>(M));
    for (int r = 0; r < M; ++r) phase[static_cast<std::size_t>(r)] = std::polar(1.0, 2.0 * std::numbers::pi * r / M);
    Kernels out;
    out.g0.assign(static_cast<std::size_t>(M), 0.0);
    if (with_g1) out.g1.assign(static_cast<std::size_t>(M), 0.0);
    for (int d = 0; d < M; ++d) {
        cplx a0 = 0.0, a1 = 0.0;
        for (int k = 0; k < M; ++k) {
            const cplx e = phase[static_cast<std::size_t>((static_cast<long long>(k) * d) % M)];
            const cplx t = e * c[static_cast<std::size_t>(k)];
            a0 += t;
            if (with_g1) a1 += t * xi[static_cast<std::size_t>(k)];
        }
        out.g0[static_cast<std::size_t>(d)] = a0 / static_cast<double>(M);
        if (with_g1) out.g1[static_cast<std::size_t>(d)] = a1 / static_cast<double>(M);
    }
    return out;
}

int wrap(int d, int M) { return ((d % M) + M) % M; }

} // namespace

DiscreteOperator free_dirac_resolvent(const GridModel& g, const Fiber& f, double m, cplx z, bool dense) {
    g.validate();
    const cplx w = z * z - m * m;
    guard_resonance(g, w);
    const auto xi = g.freqs();
    const Eigen::Index N = f.alpha1.rows();
    DiscreteOperator op;
    op.grid = g;
    op.fiber_dim = static_cast<int>(N);
    const ComplexMatrix base = m * f.beta + z * ComplexMatrix::Identity(N, N);
    for (double x : xi) op.symbols.push_back((f.alpha1 * x + base) / (x * x - w));
    if (dense) {
        const Kernels kr = periodic_kernels(g, w, true);
        ComplexMatrix R(g.M * N, g.M * N);
        for (int i = 0; i < g.M; ++i)
            for (int j = 0; j < g.M; ++j) {
                const auto d = static_cast<std::size_t>(wrap(i - j, g.M));
                R.block(i * N, j * N, N, N) = kr.g1[d] * f.alpha1 + kr.g0[d] * base;
            }
        op.dense = std::move(R);
    }
    return op;
}

ComplexMatrix laplace_resolvent(const GridModel& g, cplx w) {
    g.validate();
    guard_resonance(g, w);
    const Kernels kr = periodic_kernels(g, w, false);
    ComplexMatrix R(g.M, g.M);
    for (int i = 0; i < g.M; ++i)
        for (int j = 0; j < g.M; ++j) R(i, j) = kr.g0[static_cast<std::size_t>(wrap(i - j, g.M))];
    return R;
}

KernelCheck schrodinger_kernel_bound_check(cplx z, int xs) {
    require(xs >= 2, "kernel check: need at least two sample points");
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw SingularPointError("kernel check: z lies on [0, inf)");
    // branch with Im sqrt(z) > 0 off the cut; std::sqrt returns Re >= 0 instead
    cplx s = std::sqrt(z);
    if (s.imag() < 0.0) s = -s;
    KernelCheck r;
    r.z = z;
    r.bound = 0.5 / std::sqrt(std::abs(z));
    for (int i = 0; i < xs; ++i)
        for (int j = 0; j < xs; ++j) {
            const double x = -5.0 + 10.0 * i / (xs - 1), y = -5.0 + 10.0 * j / (xs - 1);
            const double k = std::abs(I_unit / (2.0 * s) * std::exp(I_unit * s * std::abs(x - y)));
            r.sup = std::max(r.sup, k);
            if (i == j) r.diagonal_ratio = k / r.bound;
        }
    r.ratio = r.sup / r.bound;
    return r;
}

namespace {

std::map<std::string, double> parse_keys(const std::string& body, const std::string& whole) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        require(eq != std::string::npos, "profile: expected key=value in '" + whole + "'");
        try {
            std::size_t used = 0;
            const std::string val = item.substr(eq + 1);
            kv[item.substr(0, eq)] = std::stod(val, &used);
            require(used == val.size(), "profile: bad number in '" + whole + "'");
        } catch (const std::logic_error&) {
            throw PreconditionError("profile: bad number in '" + whole + "'");
        }
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& k, double dflt) {
    const auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    const double v = it->second;
    kv.erase(it);
    return v;
}

double l1(const std::vector<cplx>& v, double h) {
    double s = 0.0;
    for (const cplx& x : v) s += std::abs(x);
    return s * h;
}

} // namespace

ScalarProfile parse_profile(const std::string& spec, const GridModel& g) {
    g.validate();
    const auto colon = spec.find(':');
    require(colon != std::string::npos, "profile: expected kind:params, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
    const auto x = g.xs();
    ScalarProfile p;
    p.description = spec;
    p.values.assign(x.size(), 0.0);
    if (kind == "file") {
        std::ifstream in(body);
        require(static_cast<bool>(in), "profile: cannot open '" + body + "'");
        std::vector<std::pair<double, double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double a, b;
            if (ls >> a >> b) rows.emplace_back(a, b);
            else require(rows.empty(), "profile: malformed row '" + line + "' in " + body);
        }
        require(rows.size() >= 2, "profile: file needs at least two rows");
        std::sort(rows.begin(), rows.end());
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double xj = x[j];
            if (xj < rows.front().first || xj > rows.back().first) continue;
            const auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(xj, -kInf));
            if (it->first == xj || it == rows.begin()) { p.values[j] = it->second; continue; }
            const auto& [x1, v1] = *it;
            const auto& [x0, v0] = *(it - 1);
            p.values[j] = v0 + (v1 - v0) * (xj - x0) / (x1 - x0);
        }
    } else {
        auto kv = parse_keys(body, spec);
        if (kind == "gaussian") {
            const double amp = take(kv, "amp", 1.0), w = take(kv, "width", 1.0);
            require(w > 0.0, "profile: gaussian width must be positive");
            for (std::size_t j = 0; j < x.size(); ++j)
                p.values[j] = amp * std::exp(-x[j] * x[j] / (2.0 * w * w)) / (w * std::sqrt(2.0 * std::numbers::pi));
        } else if (kind == "step") {
            const double r0 = take(kv, "r0", 1.0), amp = take(kv, "amp", 1.0);
            require(r0 > 0.0, "profile: step radius must be positive");
            for (std::size_t j = 0; j < x.size(); ++j)
                if (std::abs(x[j]) <= r0) p.values[j] = amp;
        } else if (kind == "delta") {
            const double amp = take(kv, "amp", 1.0);
            p.values[static_cast<std::size_t>(g.M / 2)] = amp / g.h();
        } else {
            throw PreconditionError("profile: unknown kind '" + kind + "'");
        }
        require(kv.empty(), "profile: unknown key '" + (kv.empty() ? "" : kv.begin()->first) + "' in '" + spec + "'");
    }
    require(std::abs(p.values.front()) < 1e-10 && std::abs(p.values.back()) < 1e-10,
            "profile: |v| must decay below 1e-10 at the grid boundary");
    p.l1_norm = l1(p.values, g.h());
    return p;
}

ScalarProfile scaled(const ScalarProfile& v, double s) {
    ScalarProfile out = v;
    for (cplx& x : out.values) x *= s;
    out.l1_norm = v.l1_norm * std::abs(s);
    out.description = v.description + " * " + std::to_string(s);
    return out;
}

namespace {

void require_rigid(const RigidPotential& pot) {
    const RAReport rep = verify(pot.A, pot.B, dirac_matrices(pot.n));
    if (!(rep.residual <= 1e-10))
        throw PreconditionError("birman_schwinger: potential is not rigid (residual " +
                                std::to_string(rep.residual) + ")");
}

// a = |v|^{1/2}, b~ = v / |v|^{1/2} so that v = b~ a
void split(const ScalarProfile& v, std::vector<double>& a, std::vector<cplx>& bt) {
    a.resize(v.values.size());
    bt.resize(v.values.size());
    for (std::size_t j = 0; j < v.values.size(); ++j) {
        const double mod = std::abs(v.values[j]);
        a[j] = std::sqrt(mod);
        bt[j] = mod > 0.0 ? v.values[j] / a[j] : 0.0;
    }
}

ComplexMatrix scalar_factor(const GridModel& g, const ScalarProfile& v, cplx w) {
    std::vector<double> a;
    std::vector<cplx> bt;
    split(v, a, bt);
    ComplexMatrix X = laplace_resolvent(g, w);
    for (int i = 0; i < g.M; ++i)
        for (int j = 0; j < g.M; ++j) X(i, j) *= a[static_cast<std::size_t>(i)] * bt[static_cast<std::size_t>(j)];
    return X;
}

} // namespace

BirmanSchwinger birman_schwinger(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                 double m, cplx z, bool dense) {
    g.validate();
    require(static_cast<int>(v.values.size()) == g.M, "birman_schwinger: profile is not sampled on this grid");
    require_rigid(pot);
    const Fiber f = fiber(pot.n);
    const Eigen::Index N = f.alpha1.rows();
    BirmanSchwinger out;
    out.fiber_factor = m * pot.A * f.beta * pot.B.adjoint() + z * pot.A * pot.B.adjoint();
    const ComplexMatrix X = scalar_factor(g, v, z * z - m * m);
    out.factorized_norm = spectral_norm(X) * spectral_norm(out.fiber_factor);
    if (!dense) {
        out.norm = out.factorized_norm;
        return out;
    }
    const DiscreteOperator R = free_dirac_resolvent(g, f, m, z, true);
    std::vector<double> a;
    std::vector<cplx> bt;
    split(v, a, bt);
    const ComplexMatrix Bs = pot.B.adjoint();
    out.K.resize(g.M * N, g.M * N);
    for (int i = 0; i < g.M; ++i)
        for (int j = 0; j < g.M; ++j)
            out.K.block(i * N, j * N, N, N) = (a[static_cast<std::size_t>(i)] * bt[static_cast<std::size_t>(j)]) *
                                              (pot.A * R.dense->block(i * N, j * N, N, N) * Bs);
    out.norm = spectral_norm(out.K);
    const ComplexMatrix Kf = kron(X, out.fiber_factor);
    const double diff = (out.K - Kf).norm(), ref = out.K.norm();
    out.deviation_is_absolute = ref < 1e-12;
    out.factorized_deviation = out.deviation_is_absolute ? diff : diff / ref;
    return out;
}

std::string to_string(FilterTag t) {
    switch (t) {
    case FilterTag::kept: return "kept";
    case FilterTag::free_spectrum: return "free_spectrum";
    case FilterTag::delocalized: return "delocalized";
    }
    return "?";
}

EnclosureCheckReport perturbed_spectrum(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                        double m, EnclosureSpec spec, const SpectrumOptions& opt) {
    g.validate();
    require(static_cast<int>(v.values.size()) == g.M, "perturbed_spectrum: profile is not sampled on this grid");
    const Fiber f = fiber(pot.n);
    const Eigen::Index N = f.alpha1.rows();
    require(g.M * N <= 8192, "perturbed_spectrum: M N exceeds the dense eigensolve budget of 8192");
    spec.norm_value = v.l1_norm;
    spec.m = m;
    validate(spec);

    EnclosureCheckReport rep;
    rep.spec = spec;
    rep.tol_ess = opt.tol_ess.value_or(5.0 * 2.0 * std::numbers::pi / g.L);
    rep.tol_im = opt.tol_im;
    rep.tail_fraction = opt.tail_fraction;

    ComplexMatrix H = dirac_dense(g, f, m);
    const ComplexMatrix V = pot.B.adjoint() * pot.A;
    for (int j = 0; j < g.M; ++j) H.block(j * N, j * N, N, N) += v.values[static_cast<std::size_t>(j)] * V;
    const EigenDecomposition ed = eigen_decompose(H);

    std::vector<double> free;
    for (double xi : g.freqs()) {
        free.push_back(std::sqrt(xi * xi + m * m));
        free.push_back(-free.back());
    }
    const auto x = g.xs();
    for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
        EigenEntry e;
        e.z = ed.values(k);
        e.free_distance = kInf;
        for (double s : free) e.free_distance = std::min(e.free_distance, std::abs(e.z - s));
        double tail = 0.0, total = 0.0;
        for (int j = 0; j < g.M; ++j) {
            const double mass = ed.vectors.col(k).segment(j * N, N).squaredNorm();
            total += mass;
            if (std::abs(x[static_cast<std::size_t>(j)]) > 0.25 * g.L) tail += mass;
        }
        e.tail_mass = total > 0.0 ? tail / total : 0.0;
        if (e.free_distance <= rep.tol_ess && std::abs(e.z.imag()) < rep.tol_im) e.tag = FilterTag::free_spectrum;
        else if (e.tail_mass > rep.tail_fraction) e.tag = FilterTag::delocalized;
        if (e.tag == FilterTag::kept) {
            ++rep.kept;
            try {
                const Sides sd = sides(spec, e.z);
                e.margin = sd.rhs > 0.0 ? (sd.rhs - sd.lhs) / sd.rhs : -kInf;
                e.violates = !member(spec, e.z);
            } catch (const SingularPointError&) {
                e.margin = std::nan("");
                e.violates = true;
            }
            if (e.violates) ++rep.violations;
        }
        rep.eigenvalues.push_back(e);
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const EigenEntry& a, const EigenEntry& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return rep;
}

std::vector<cplx> z_rectangle(double re0, double re1, double im0, double im1, int nre, int nim) {
    require(nre >= 1 && nim >= 1, "z_rectangle: resolution must be >= 1");
    std::vector<cplx> zs;
    for (int b = 0; b < nim; ++b)
        for (int a = 0; a < nre; ++a)
            zs.emplace_back(nre > 1 ? re0 + (re1 - re0) * a / (nre - 1) : re0,
                            nim > 1 ? im0 + (im1 - im0) * b / (nim - 1) : im0);
    return zs;
}

namespace {

SweepPoint sweep_point(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v, double m, cplx z) {
    SweepPoint p;
    p.z = z;
    try {
        p.bs_norm = birman_schwinger(g, pot, v, m, z, false).norm;
    } catch (const Error& e) {
        p.ok = false;
        p.error = e.what();
        p.bs_norm = std::nan("");
    }
    p.kappa_bound = std::nan("");
    if (pot.ra_class) {
        try {
            p.kappa_bound = kappa(KappaForm::power, *pot.ra_class, m, 1, 1.0, z) * v.l1_norm;
        } catch (const SingularPointError&) {
        }
    }
    return p;
}

void sweep_preconditions(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v) {
    g.validate();
    require(static_cast<int>(v.values.size()) == g.M, "bs_norm_sweep: profile is not sampled on this grid");
    require_rigid(pot);
}

} // namespace

std::vector<SweepPoint> bs_norm_sweep(const GridModel& g, const RigidPotential& pot, const ScalarProfile& v,
                                      double m, const std::vector<cplx>& zs) {
    sweep_preconditions(g, pot, v);
    std::vector<SweepPoint> out(zs.size());
    const auto n = static_cast<long long>(zs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = sweep_point(g, pot, v, m, zs[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<SweepPoint> bs_norm_sweep_serial(const GridModel& g, const RigidPotential& pot,
                                             const ScalarProfile& v, double m, const std::vector<cplx>& zs) {
    sweep_preconditions(g, pot, v);
    std::vector<SweepPoint> out;
    for (const cplx& z : zs) out.push_back(sweep_point(g, pot, v, m, z));
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0 && y[i] > 0, "loglog_slope: samples must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    require(den > 0, "loglog_slope: abscissae are all equal");
    return (n * sxy - sx * sy) / den;
}

} // namespace keller
