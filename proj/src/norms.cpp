#include "keller/norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace keller {

void RadialProfile::validate() const {
    require(n >= 1, "RadialProfile: dimension must be >= 1");
    require(r.size() == value.size(), "RadialProfile: radii and values differ in length");
    for (std::size_t i = 0; i < r.size(); ++i) {
        require(std::isfinite(r[i]) && r[i] > 0.0, "RadialProfile: radii must be positive");
        require(i == 0 || r[i] > r[i - 1], "RadialProfile: radii must be strictly increasing");
        require(std::isfinite(value[i]) && value[i] >= 0.0,
                "RadialProfile: values must be finite and nonnegative");
    }
}

double lp_norm(std::span<const double> x, std::span<const double> f, double p) {
    require(p >= 1.0, "lp_norm: exponent must be >= 1");
    require(x.size() == f.size(), "lp_norm: grid and samples differ in length");
    if (f.empty()) return 0.0;
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (x[i] - x[i - 1]) * (std::pow(std::abs(f[i - 1]), p) + std::pow(std::abs(f[i]), p));
    return std::pow(acc, 1.0 / p);
}

RadialProfile to_piecewise_constant(const RadialProfile& f, int pieces) {
    f.validate();
    if (f.interp == Interpolation::piecewise_constant || f.r.empty()) return f;
    require(pieces >= static_cast<int>(f.r.size()), "to_piecewise_constant: too few pieces");
    RadialProfile out;
    out.n = f.n;
    out.interp = Interpolation::piecewise_constant;
    const double total = f.r.back();
    for (std::size_t i = 0; i < f.r.size(); ++i) {
        const double a = i ? f.r[i - 1] : 0.0, b = f.r[i];
        const double va = i ? f.value[i - 1] : f.value[0], vb = f.value[i];
        const int k = std::max(1, static_cast<int>(std::lround(pieces * (b - a) / total)));
        for (int j = 1; j <= k; ++j) {
            const double t_mid = (j - 0.5) / k;
            out.r.push_back(j == k ? b : a + (b - a) * j / k);
            out.value.push_back(va + (vb - va) * t_mid);
        }
    }
    return out;
}

namespace {

// mu((a, b]) for mu = r^{n-1} dr
double shell_measure(double a, double b, int n) {
    return (std::pow(b, n) - std::pow(a, n)) / n;
}

} // namespace

double lp_radial_norm(const RadialProfile& f0, double p) {
    require(p >= 1.0, "lp_radial_norm: exponent must be >= 1");
    const RadialProfile f = to_piecewise_constant(f0);
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.value) m = std::max(m, v);
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < f.r.size(); ++i)
        acc += std::pow(f.value[i], p) * shell_measure(i ? f.r[i - 1] : 0.0, f.r[i], f.n);
    return std::pow(acc, 1.0 / p);
}

double lorentz_radial_norm(const RadialProfile& f0, double p, double q) {
    require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q),
            "lorentz_radial_norm: requires 1 <= p, q < inf");
    const RadialProfile f = to_piecewise_constant(f0);
    // level -> measure of the set where f equals that level
    std::map<double, double> level_measure;
    for (std::size_t i = 0; i < f.r.size(); ++i)
        if (f.value[i] > 0.0) level_measure[f.value[i]] += shell_measure(i ? f.r[i - 1] : 0.0, f.r[i], f.n);
    // mu{f >= t} is constant on (u_{j-1}, u_j]; integral of t^{q-1} there is (u_j^q - u_{j-1}^q)/q
    double tail = 0.0;
    for (const auto& [u, m] : level_measure) tail += m;
    double acc = 0.0, prev = 0.0;
    for (const auto& [u, m] : level_measure) {
        acc += std::pow(tail, q / p) * (std::pow(u, q) - std::pow(prev, q)) / q;
        tail -= m;
        prev = u;
    }
    return std::pow(p * acc, 1.0 / q);
}

namespace {

// sqrt(b^2 - R^2) - sqrt(a^2 - R^2) for R <= a < b, without cancellation
double chord_difference(double a, double b, double R) {
    const double sa = std::sqrt(std::max(0.0, (a - R) * (a + R)));
    const double sb = std::sqrt(std::max(0.0, (b - R) * (b + R)));
    const double den = sa + sb;
    return den > 0.0 ? (b - a) * (b + a) / den : 0.0;
}

double mt_inner(const RadialProfile& w, double R) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.r.size(); ++i) {
        const double a = i ? w.r[i - 1] : 0.0, b = w.r[i];
        if (b <= R || w.value[i] == 0.0) continue;
        acc += w.value[i] * (a > R ? chord_difference(a, b, R)
                                   : std::sqrt((b - R) * (b + R)));
    }
    return acc;
}

} // namespace

double mt_norm(const RadialProfile& w0) {
    const RadialProfile w = to_piecewise_constant(w0);
    if (w.r.empty()) return 0.0;
    // the inner integral is smooth in R between consecutive radii
    double best = mt_inner(w, 0.0);
    constexpr int kSamples = 32;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t i = 0; i < w.r.size(); ++i) {
        const double a = i ? w.r[i - 1] : 0.0, b = w.r[i];
        int arg = 0;
        double local = -1.0;
        for (int j = 0; j <= kSamples; ++j) {
            const double v = mt_inner(w, a + (b - a) * j / kSamples);
            if (v > local) { local = v; arg = j; }
        }
        double lo = a + (b - a) * std::max(0, arg - 1) / kSamples;
        double hi = a + (b - a) * std::min(kSamples, arg + 1) / kSamples;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = mt_inner(w, x1), f2 = mt_inner(w, x2);
        for (int it = 0; it < 80 && hi - lo > 1e-15 * b; ++it) {
            if (f1 < f2) { lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = mt_inner(w, x2); }
            else { hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = mt_inner(w, x1); }
        }
        best = std::max({best, local, f1, f2});
    }
    return best;
}

RadialProfile load_profile_csv(const std::string& path, int n, Interpolation interp) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("load_profile_csv: cannot open '" + path + "'");
    RadialProfile f;
    f.n = n;
    f.interp = interp;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double r, v;
        if (!(ss >> r >> v)) {
            if (first) { first = false; continue; }
            throw PreconditionError("load_profile_csv: malformed row '" + line + "'");
        }
        first = false;
        f.r.push_back(r);
        f.value.push_back(v);
    }
    f.validate();
    return f;
}

} // namespace keller
