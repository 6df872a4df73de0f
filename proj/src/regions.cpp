#include "keller/regions.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace keller {

std::string to_string(Theorem t) {
    switch (t) {
    case Theorem::T2_1: return "t2.1";
    case Theorem::T2_2: return "t2.2";
    case Theorem::T2_3: return "t2.3";
    case Theorem::T2_5: return "t2.5";
    case Theorem::T2_6: return "t2.6";
    case Theorem::T2_7: return "t2.7";
    case Theorem::T2_8: return "t2.8";
    case Theorem::T2_9: return "t2.9";
    case Theorem::DFS: return "dfs";
    }
    return "?";
}

Theorem parse_theorem(const std::string& s) {
    std::string t;
    for (char ch : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    for (Theorem th : {Theorem::T2_1, Theorem::T2_2, Theorem::T2_3, Theorem::T2_5, Theorem::T2_6,
                       Theorem::T2_7, Theorem::T2_8, Theorem::T2_9, Theorem::DFS})
        if (to_string(th) == t) return th;
    throw PreconditionError("unknown theorem tag '" + s + "'");
}

EnclosureSpec default_spec(Theorem t, double m, double norm_value) {
    EnclosureSpec s;
    s.theorem = t;
    s.m = m;
    s.norm_value = norm_value;
    s.constant = 1.0;
    switch (t) {
    case Theorem::T2_1: s.n = 1; s.gamma = 0.5; s.constant = 0.5; break;
    case Theorem::T2_2: s.n = 3; s.gamma = 1.0; break;
    case Theorem::T2_3: s.n = 3; s.gamma = 1.0; break;
    case Theorem::T2_5: s.n = 1; s.constant = 2.0; break;
    case Theorem::T2_6: s.n = 3; s.gamma = 2.5; break;
    case Theorem::T2_7: s.n = 1; s.constant = 2.0; break;
    case Theorem::T2_8: s.n = 2; s.gamma = 2.0; break;
    case Theorem::T2_9: s.n = 2; break;
    case Theorem::DFS: s.n = 1; break;
    }
    return s;
}

bool constant_is_placeholder(const EnclosureSpec& s) {
    switch (s.theorem) {
    case Theorem::T2_1: return s.constant != 0.5;
    case Theorem::T2_5:
    case Theorem::T2_7: return !(s.n == 1 && s.constant == 2.0);
    default: return true;
    }
}

namespace {

bool excluded_dim(int n, std::initializer_list<int> bad) {
    return std::find(bad.begin(), bad.end(), n) != bad.end();
}

std::string tag(const EnclosureSpec& s) { return "enclosure " + to_string(s.theorem) + ": "; }

bool region_empty(const EnclosureSpec& s) {
    switch (s.theorem) {
    case Theorem::T2_5:
    case Theorem::T2_7:
    case Theorem::T2_9:
    case Theorem::DFS: return s.m == 0.0;
    default: return false;
    }
}

double disk_ratio(const EnclosureSpec& s) {
    const double q = s.norm_value;
    switch (s.theorem) {
    case Theorem::T2_7: return q == 0 ? kInf : std::pow(s.constant / q, 2);
    case Theorem::T2_9: return q == 0 ? kInf : std::pow(2.0 * s.constant / q - 1.0, 2);
    case Theorem::DFS: return q == 0 ? kInf : std::pow((s.n + 1) * s.constant / q - s.n, 2);
    default: throw PreconditionError(tag(s) + "no disk form");
    }
}

bool is_disk_theorem(Theorem t) {
    return t == Theorem::T2_7 || t == Theorem::T2_9 || t == Theorem::DFS;
}

} // namespace

void validate(const EnclosureSpec& s) {
    require(std::isfinite(s.m) && s.m >= 0.0, tag(s) + "mass must be finite and >= 0");
    require(std::isfinite(s.norm_value) && s.norm_value >= 0.0, tag(s) + "norm must be finite and >= 0");
    require(std::isfinite(s.constant) && s.constant > 0.0, tag(s) + "constant must be positive");
    require(s.n >= 1, tag(s) + "dimension must be >= 1");
    const double g = s.gamma, half_n = 0.5 * s.n;
    const double pw = g + half_n;
    switch (s.theorem) {
    case Theorem::T2_1:
        require(s.n == 1, tag(s) + "requires n = 1");
        break;
    case Theorem::T2_2:
        require(!excluded_dim(s.n, {1, 2, 4}), tag(s) + "requires n not in {1,2,4}");
        require(g > 0.0 && g <= half_n, tag(s) + "requires 0 < gamma <= n/2");
        break;
    case Theorem::T2_3:
        require(!excluded_dim(s.n, {1, 2, 4}), tag(s) + "requires n not in {1,2,4}");
        require(g > 0.5, tag(s) + "requires gamma > 1/2");
        break;
    case Theorem::T2_5:
        require(!excluded_dim(s.n, {2, 4}), tag(s) + "requires n not in {2,4}");
        require(s.norm_value < s.constant, tag(s) + "smallness assumption violated (norm >= C0)");
        break;
    case Theorem::T2_6:
        require(!excluded_dim(s.n, {1, 2, 4}), tag(s) + "requires n not in {1,2,4}");
        require(g >= half_n, tag(s) + "requires gamma >= n/2");
        require(g != half_n || std::pow(s.norm_value, pw) < s.constant,
                tag(s) + "smallness assumption violated at gamma = n/2");
        break;
    case Theorem::T2_7:
        require(s.norm_value < s.constant, tag(s) + "smallness assumption violated (norm >= C0)");
        break;
    case Theorem::T2_8:
        require(s.n >= 2, tag(s) + "requires n >= 2");
        require(g >= half_n, tag(s) + "requires gamma >= n/2");
        require(g != half_n || std::pow(s.norm_value, pw) < s.constant,
                tag(s) + "smallness assumption violated at gamma = n/2");
        break;
    case Theorem::T2_9:
        require(s.n >= 2, tag(s) + "requires n >= 2");
        require(s.norm_value < s.constant, tag(s) + "smallness assumption violated (nu <= 1)");
        break;
    case Theorem::DFS:
        require(s.norm_value < s.constant, tag(s) + "smallness assumption violated (nu <= 1)");
        break;
    }
}

double dist_to_halfline(cplx w) {
    return w.real() >= 0.0 ? std::abs(w.imag()) : std::abs(w);
}

double varkappa(RaClass c, double m, cplx z) {
    require(m >= 0.0, "varkappa: mass must be >= 0");
    switch (c) {
    case RaClass::i:
        if (m == 0.0) return std::abs(z);
        if (z == cplx(m) || z == cplx(-m))
            throw SingularPointError("varkappa: z = +-m is singular for RA(i) with m > 0");
        return std::sqrt(std::abs(z * z - m * m)) *
               std::pow(std::abs((z + m) / (z - m)), 0.5 * sgn(z.real()));
    case RaClass::ii: return m;
    case RaClass::iii: return std::abs(z);
    case RaClass::iv: return 0.0;
    }
    return 0.0;
}

double kappa(KappaForm form, RaClass c, double m, int n, double r, cplx z) {
    require(r >= 1.0, "kappa: Lebesgue exponent must be >= 1");
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const cplx w = z * z - m * m;
    const double aw = std::abs(w);
    const double vk = varkappa(c, m, z);
    if (form == KappaForm::power) {
        const double e = -1.0 + 0.5 * n * inv_r;
        if (aw == 0.0 && e < 0.0) throw SingularPointError("kappa: z^2 = m^2");
        return vk == 0.0 ? 0.0 : vk * std::pow(aw, e);
    }
    const double d = dist_to_halfline(w);
    if (d == 0.0) throw SingularPointError("kappa: z^2 - m^2 lies on [0, inf)");
    return vk == 0.0 ? 0.0 : vk * std::pow(aw, -0.5 * inv_r) * std::pow(d, -1.0 + 0.5 * (n + 1) * inv_r);
}

Sides sides(const EnclosureSpec& s, cplx z) {
    const double m = s.m, g = s.gamma;
    const cplx w = z * z - m * m;
    const double aw = std::abs(w), d = dist_to_halfline(w), az = std::abs(z);
    const double sg = sgn(z.real());
    const bool inf_gamma = std::isinf(g);
    const double pw = g + 0.5 * s.n;
    Sides out;
    switch (s.theorem) {
    case Theorem::T2_1:
        out = {std::sqrt(aw), s.constant * s.norm_value};
        break;
    case Theorem::T2_2:
        out = {std::pow(aw, g), s.constant * std::pow(s.norm_value, pw)};
        break;
    case Theorem::T2_3:
        if (inf_gamma) out = {d, s.constant * s.norm_value};
        else out = {std::sqrt(aw) * std::pow(d, g - 0.5), s.constant * std::pow(s.norm_value, pw)};
        break;
    case Theorem::T2_5:
        out.rhs = s.norm_value / s.constant;
        out.lhs = m == 0.0 ? 1.0 : (az == 0.0 ? kInf : std::sqrt(aw) / az);
        break;
    case Theorem::T2_6: {
        if (az == 0.0 && m == 0.0) throw SingularPointError(tag(s) + "z = 0 with m = 0");
        if (inf_gamma) {
            out = {az == 0.0 ? kInf : d / az, s.norm_value / s.constant};
        } else {
            out.rhs = std::pow(s.norm_value, pw) / s.constant;
            out.lhs = az == 0.0 ? kInf : std::sqrt(aw) * std::pow(az, -pw) * std::pow(d, g - 0.5);
        }
        break;
    }
    case Theorem::T2_8: {
        const double zm = std::abs(z - m), zp = std::abs(z + m);
        if (inf_gamma) {
            if ((sg >= 0 && zp == 0.0) || (sg <= 0 && zm == 0.0))
                throw SingularPointError(tag(s) + "singular point");
            out.lhs = std::pow(zm, 0.5 * (sg - 1.0)) * std::pow(zp, -0.5 * (sg + 1.0)) * d;
        } else {
            if (aw == 0.0) throw SingularPointError(tag(s) + "z = +-m is singular");
            out.lhs = std::pow(aw, 0.5 * (1.0 - pw)) * std::pow(zp / zm, -pw * sg * 0.5) *
                      std::pow(d, g - 0.5);
        }
        out.rhs = (inf_gamma ? s.norm_value : std::pow(s.norm_value, pw)) / s.constant;
        break;
    }
    case Theorem::T2_7:
    case Theorem::T2_9:
    case Theorem::DFS: {
        const double zm = std::abs(z - m), zp = std::abs(z + m);
        out.lhs = disk_ratio(s);
        if (sg == 0.0) out.rhs = 1.0;
        else if (sg > 0) out.rhs = zm == 0.0 ? kInf : zp / zm;
        else out.rhs = zp == 0.0 ? kInf : zm / zp;
        break;
    }
    }
    return out;
}

bool member(const EnclosureSpec& s, cplx z) {
    if (region_empty(s)) return false;
    const Sides sd = sides(s, z);
    if (std::isinf(sd.rhs)) return true;
    return sd.lhs <= sd.rhs * (1.0 + kMemberSlack);
}

Disks disks_from_ratio(double m, double k) {
    require(m > 0.0, "disks: requires m > 0");
    require(k > 1.0, "disks: smallness assumption violated (ratio <= 1)");
    Disks d;
    d.ratio = k;
    if (std::isinf(k)) {
        d.c_plus = m;
        d.c_minus = -m;
        d.radius = 0.0;
        return d;
    }
    const double k2 = k * k;
    d.c_plus = m * (k2 + 1.0) / (k2 - 1.0);
    d.c_minus = -d.c_plus;
    d.radius = m * 2.0 * k / (k2 - 1.0);
    return d;
}

Disks disks(const EnclosureSpec& s) {
    require(is_disk_theorem(s.theorem), tag(s) + "has no disk form");
    require(s.m > 0.0, tag(s) + "disks require m > 0");
    validate(s);
    const Disks d = disks_from_ratio(s.m, disk_ratio(s));
    // boundary circles are the Apollonius loci |(z+m)/(z-m)|^{+-1} = k
    for (int j = 0; j < 64 && d.radius > 0.0; ++j) {
        const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * j / 64);
        const cplx zp = d.c_plus + d.radius * u, zn = d.c_minus + d.radius * u;
        const double rp = std::abs(zp + s.m) / std::abs(zp - s.m);
        const double rn = std::abs(zn - s.m) / std::abs(zn + s.m);
        if (std::abs(rp - d.ratio) > 1e-9 * d.ratio || std::abs(rn - d.ratio) > 1e-9 * d.ratio)
            throw NumericalError(tag(s) + "disk circles fail the Apollonius equivalence");
    }
    return d;
}

Window default_window(const EnclosureSpec& s) {
    double W = 3.0 * std::max(1.0, s.m);
    const double pw = s.gamma + 0.5 * s.n;
    switch (s.theorem) {
    case Theorem::T2_3: {
        const double t = std::isinf(s.gamma) ? s.constant * s.norm_value
                                             : std::pow(s.constant * std::pow(s.norm_value, pw), 1.0 / s.gamma);
        W = 2.0 * (s.m + std::sqrt(t));
        break;
    }
    case Theorem::T2_5: {
        const double q = s.norm_value / s.constant;
        W = 1.3 * std::max(s.m, 1e-3) / std::sqrt(std::max(1e-12, 1.0 - q * q));
        break;
    }
    default: break;
    }
    return {-W, W, -W, W};
}

namespace {

void add_component(Boundary& b, const std::vector<cplx>& pts) {
    if (pts.empty()) return;
    for (const cplx& z : pts) {
        b.points.push_back(z);
        b.component.push_back(b.component_count);
    }
    ++b.component_count;
}

Boundary cassini(double m, double t, int samples) {
    Boundary b;
    const double m2 = m * m;
    const double two_pi = 2.0 * std::numbers::pi;
    if (t <= 0.0) {
        b.diagnostic = "empty region: threshold is zero";
        return b;
    }
    // z^2 = m^2 + t e^{i phi} traces |z^2 - m^2| = t exactly
    if (m2 > 0.0 && std::abs(t - m2) <= 1e-14 * m2) {
        std::vector<cplx> lobe;
        lobe.emplace_back(0.0, 0.0);
        for (int j = 1; j < samples; ++j) {
            const double phi = -std::numbers::pi + two_pi * j / samples;
            lobe.push_back(std::sqrt(cplx(m2) + t * std::polar(1.0, phi)));
        }
        std::vector<cplx> all = lobe;
        all.emplace_back(0.0, 0.0);
        for (std::size_t j = 1; j < lobe.size(); ++j) all.push_back(-lobe[j]);
        add_component(b, all);
        b.diagnostic = "lemniscate: single component self-touching at the origin";
        return b;
    }
    if (t < m2) {
        std::vector<cplx> right;
        for (int j = 0; j < samples; ++j)
            right.push_back(std::sqrt(cplx(m2) + t * std::polar(1.0, two_pi * j / samples)));
        std::vector<cplx> left;
        for (const cplx& z : right) left.push_back(-z);
        add_component(b, right);
        add_component(b, left);
        return b;
    }
    std::vector<cplx> loop;
    cplx prev = std::sqrt(cplx(m2 + t));
    for (int j = 0; j < samples; ++j) {
        const cplx r = std::sqrt(cplx(m2) + t * std::polar(1.0, 2.0 * two_pi * j / samples));
        prev = std::abs(r - prev) <= std::abs(-r - prev) ? r : -r;
        loop.push_back(prev);
    }
    add_component(b, loop);
    return b;
}

// Level-set tracing on a grid with bisection refinement along crossing edges.
class Tracer {
public:
    Tracer(const EnclosureSpec& s, const Window& w, int g) : spec_(s), g_(g) {
        // shift the lattice off the symmetric points 0, +-m
        dx_ = (w.re_max - w.re_min) / g;
        dy_ = (w.im_max - w.im_min) / g;
        x0_ = w.re_min + 0.1234567 * dx_;
        y0_ = w.im_min + 0.0765432 * dy_;
        state_.resize(static_cast<std::size_t>((g + 1) * (g + 1)));
#pragma omp parallel for schedule(static)
        for (int j = 0; j <= g; ++j)
            for (int i = 0; i <= g; ++i) state_[idx(i, j)] = classify(vertex(i, j));
    }

    Boundary trace() {
        const int G = g_;
        const int H = G * (G + 1);
        std::vector<std::array<int, 2>> adj(static_cast<std::size_t>(H + (G + 1) * G), {-1, -1});
        auto link = [&](int a, int b) {
            for (int e : {a, b}) {
                auto& slot = adj[static_cast<std::size_t>(e)];
                const int other = e == a ? b : a;
                if (slot[0] < 0) slot[0] = other;
                else if (slot[1] < 0) slot[1] = other;
            }
        };
        auto hedge = [&](int i, int j) { return j * G + i; };
        auto vedge = [&](int i, int j) { return H + j * (G + 1) + i; };
        for (int j = 0; j < G; ++j)
            for (int i = 0; i < G; ++i) {
                const bool c0 = in(i, j), c1 = in(i + 1, j), c2 = in(i + 1, j + 1), c3 = in(i, j + 1);
                const int e[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
                const bool cut[4] = {c0 != c1, c1 != c2, c2 != c3, c3 != c0};
                const int count = cut[0] + cut[1] + cut[2] + cut[3];
                if (count == 2) {
                    int pair[2], k = 0;
                    for (int q = 0; q < 4; ++q)
                        if (cut[q]) pair[k++] = e[q];
                    link(pair[0], pair[1]);
                } else if (count == 4) {
                    const cplx centre = vertex(i, j) + cplx(0.5 * dx_, 0.5 * dy_);
                    if ((classify(centre) == kInside) == c0) {
                        link(e[0], e[1]);
                        link(e[2], e[3]);
                    } else {
                        link(e[0], e[3]);
                        link(e[1], e[2]);
                    }
                }
            }
        Boundary b;
        std::vector<char> seen(adj.size(), 0);
        auto walk = [&](int start) {
            std::vector<cplx> pts;
            int prev = -1, cur = start;
            while (cur >= 0 && !seen[static_cast<std::size_t>(cur)]) {
                seen[static_cast<std::size_t>(cur)] = 1;
                cplx z;
                if (refine(cur, H, z)) pts.push_back(z);
                const auto& nb = adj[static_cast<std::size_t>(cur)];
                const int next = nb[0] != prev ? nb[0] : nb[1];
                prev = cur;
                cur = next;
            }
            add_component(b, pts);
        };
        // open chains end on the window border
        for (std::size_t e = 0; e < adj.size(); ++e)
            if (!seen[e] && adj[e][0] >= 0 && adj[e][1] < 0) walk(static_cast<int>(e));
        for (std::size_t e = 0; e < adj.size(); ++e)
            if (!seen[e] && adj[e][0] >= 0) walk(static_cast<int>(e));
        if (b.component_count == 0) b.diagnostic = "no boundary crossing inside the window";
        if (dropped_ > 0)
            b.diagnostic += (b.diagnostic.empty() ? "" : "; ") + std::to_string(dropped_) +
                            " crossings at non-smooth points omitted";
        return b;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j * (g_ + 1) + i); }
    cplx vertex(int i, int j) const { return {x0_ + i * dx_, y0_ + j * dy_}; }
    bool in(int i, int j) const { return state_[idx(i, j)] == kInside; }

    std::uint8_t classify(cplx z) const {
        try {
            return member(spec_, z) ? kInside : kOutside;
        } catch (const SingularPointError&) {
            return kSingular;
        }
    }

    // bisection on edge e; returns the inside endpoint if it sits on the equality locus
    bool refine(int e, int H, cplx& out) {
        cplx a, b;
        if (e < H) {
            const int j = e / g_, i = e % g_;
            a = vertex(i, j);
            b = vertex(i + 1, j);
        } else {
            const int r = e - H, j = r / (g_ + 1), i = r % (g_ + 1);
            a = vertex(i, j);
            b = vertex(i, j + 1);
        }
        if (classify(a) != kInside) std::swap(a, b);
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            const cplx mid = 0.5 * (a + b);
            if (classify(mid) == kInside) a = mid;
            else b = mid;
        }
        try {
            const Sides sd = sides(spec_, a);
            if (std::isfinite(sd.lhs) && std::abs(sd.lhs - sd.rhs) <= 1e-9 * sd.rhs) {
                out = a;
                return true;
            }
        } catch (const SingularPointError&) {
        }
        ++dropped_;
        return false;
    }

    const EnclosureSpec& spec_;
    int g_;
    double x0_, y0_, dx_, dy_;
    std::vector<std::uint8_t> state_;
    int dropped_ = 0;
};

} // namespace

Boundary boundary(const EnclosureSpec& s, int samples, const std::optional<Window>& window) {
    require(samples >= 16, "boundary: samples must be >= 16");
    validate(s);
    if (region_empty(s)) {
        Boundary b;
        b.diagnostic = "empty region: massless case has no eigenvalue enclosure";
        return b;
    }
    const double pw = s.gamma + 0.5 * s.n;
    switch (s.theorem) {
    case Theorem::T2_1:
        return cassini(s.m, std::pow(s.constant * s.norm_value, 2), samples);
    case Theorem::T2_2:
        return cassini(s.m, std::pow(s.constant * std::pow(s.norm_value, pw), 1.0 / s.gamma), samples);
    case Theorem::T2_7:
    case Theorem::T2_9:
    case Theorem::DFS: {
        const Disks d = disks(s);
        Boundary b;
        for (cplx c : {d.c_plus, d.c_minus}) {
            std::vector<cplx> circle;
            for (int j = 0; j < samples; ++j)
                circle.push_back(c + d.radius * std::polar(1.0, 2.0 * std::numbers::pi * j / samples));
            add_component(b, circle);
        }
        if (d.radius == 0.0) b.diagnostic = "degenerate disks: zero radius";
        return b;
    }
    default: break;
    }
    const Window w = window.value_or(default_window(s));
    require(w.re_max > w.re_min && w.im_max > w.im_min, "boundary: empty window");
    Tracer tracer(s, w, std::clamp(samples / 2, 64, 1024));
    return tracer.trace();
}

cplx grid_point(const GridSpec& g, int ix, int iy) {
    const double x = g.nx > 1 ? g.window.re_min + (g.window.re_max - g.window.re_min) * ix / (g.nx - 1)
                              : g.window.re_min;
    const double y = g.ny > 1 ? g.window.im_min + (g.window.im_max - g.window.im_min) * iy / (g.ny - 1)
                              : g.window.im_min;
    return {x, y};
}

namespace {

std::uint8_t grid_cell(const EnclosureSpec& s, const GridSpec& g, int ix, int iy) {
    try {
        return member(s, grid_point(g, ix, iy)) ? kInside : kOutside;
    } catch (const SingularPointError&) {
        return kSingular;
    }
}

} // namespace

std::vector<std::uint8_t> membership_grid(const EnclosureSpec& s, const GridSpec& g) {
    require(g.nx >= 1 && g.ny >= 1, "membership_grid: empty grid");
    validate(s);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out[static_cast<std::size_t>(iy) * g.nx + ix] = grid_cell(s, g, ix, iy);
    return out;
}

std::vector<std::uint8_t> membership_grid_serial(const EnclosureSpec& s, const GridSpec& g) {
    require(g.nx >= 1 && g.ny >= 1, "membership_grid: empty grid");
    validate(s);
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) out.push_back(grid_cell(s, g, ix, iy));
    return out;
}

} // namespace keller
