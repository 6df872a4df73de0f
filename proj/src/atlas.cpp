#include "keller/atlas.hpp"

#include <algorithm>
#include <cctype>

#include "keller/io.hpp"

namespace keller {

namespace {

using R = Rational;

long long parse_integer(const std::string& s, const std::string& whole) {
    require(!s.empty(), "parse_rational: malformed '" + whole + "'");
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw PreconditionError("parse_rational: malformed '" + whole + "'");
    }
    require(used == s.size(), "parse_rational: malformed '" + whole + "'");
    return v;
}

} // namespace

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const long long den = parse_integer(s.substr(slash + 1), s);
        require(den != 0, "parse_rational: zero denominator in '" + s + "'");
        return R(parse_integer(s.substr(0, slash), s), den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        const std::string frac = s.substr(dot + 1);
        require(frac.size() <= 12, "parse_rational: too many decimals in '" + s + "'");
        long long scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const std::string ip = s.substr(0, dot);
        const bool neg = !ip.empty() && ip[0] == '-';
        const long long whole = ip.empty() || ip == "-" ? 0 : parse_integer(ip, s);
        const long long f = frac.empty() ? 0 : parse_integer(frac, s);
        require(f >= 0, "parse_rational: malformed '" + s + "'");
        return R(whole) + R(neg ? -f : f, scale);
    }
    return R(parse_integer(s, s));
}

Rational reciprocal_exponent(const std::string& p) {
    std::string t;
    for (char c : p) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "inf" || t == "infinity") return R(0);
    const R v = parse_rational(p);
    require(v >= R(1), "reciprocal_exponent: exponent must be >= 1, got '" + p + "'");
    return R(1) / v;
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::map<std::string, ExponentPoint> endpoints(int n) {
    require(n >= 2, "endpoints: requires n >= 2");
    const long long N = n;
    std::map<std::string, ExponentPoint> e;
    auto put = [&](const std::string& k, R x, R y) { e[k] = ExponentPoint{x, y, n}; };
    if (n >= 3) {
        put("A", R(N + 1, 2 * N), R(N - 3, 2 * N));
        put("A'", R(N + 3, 2 * N), R(N - 1, 2 * N));
        put("A0", R(N + 2, 2 * N), R(N - 2, 2 * N));
        put("F", R(2, N), R(0));
        put("F'", R(1), R(N - 2, N));
    } else {
        put("A0", R(1), R(0));
        put("D", R(3, 4), R(0));
        put("D'", R(1), R(1, 4));
    }
    put("B", R(N + 1, 2 * N), R((N - 1) * (N - 1), 2 * N * (N + 1)));
    put("B'", R(N * N + 4 * N - 1, 2 * N * (N + 1)), R(N - 1, 2 * N));
    put("B0", R(N + 3, 2 * (N + 1)), R(N - 1, 2 * (N + 1)));
    put("C", R(N + 1, 2 * N), R(N - 1, 2 * N));
    put("E", R(N - 1, 2 * N), R(N - 1, 2 * N));
    put("E'", R(N + 1, 2 * N), R(N + 1, 2 * N));
    put("E0", R(1, 2), R(1, 2));
    const bool odd = n % 2 == 1;
    const R p_star = odd ? R(3 * (N - 1), 2 * (3 * N + 1)) : R(3 * N - 2, 2 * (3 * N + 2));
    const R p_circ = odd ? R((N + 5) * (N - 1), 2 * (N * N + 4 * N - 1))
                         : R(N * N + 3 * N - 6, 2 * (N * N + 3 * N - 2));
    const R q_circ = odd ? R((N + 3) * (N - 1), 2 * (N * N + 4 * N - 1))
                         : R((N - 1) * (N + 2), 2 * (N * N + 3 * N - 2));
    put("P*", p_star, p_star);
    put("P*'", R(1) - p_star, R(1) - p_star);
    put("Po", p_circ, q_circ);
    put("Po'", R(1) - q_circ, R(1) - p_circ);
    return e;
}

Rational gamma_exponent(const ExponentPoint& pt) {
    const R N(pt.n);
    const R d = pt.x - pt.y;
    return std::max({R(0), R(1) - (N + 1) / 2 * d, (N + 1) / 2 - N * pt.x, N * pt.y - (N - 1) / 2});
}

namespace {

struct P2 {
    R x, y;
};

P2 at(const std::map<std::string, ExponentPoint>& e, const std::string& k) {
    const auto& p = e.at(k);
    return {p.x, p.y};
}

R orient(const P2& a, const P2& b, const P2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool same(const P2& a, const P2& b) { return a.x == b.x && a.y == b.y; }

// closed segment [a, b]
bool on_segment(const P2& p, const P2& a, const P2& b) {
    if (orient(a, b, p) != R(0)) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// closed convex polygon with vertices in boundary order
bool in_hull(const P2& p, const std::vector<P2>& v) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const R o = orient(v[i], v[(i + 1) % v.size()], p);
        if (o > R(0)) pos = true;
        if (o < R(0)) neg = true;
    }
    return !(pos && neg);
}

P2 as_p2(const ExponentPoint& pt) { return {pt.x, pt.y}; }

} // namespace

bool in_square(const ExponentPoint& pt) {
    return pt.x >= R(0) && pt.x <= R(1) && pt.y >= R(0) && pt.y <= R(1);
}

bool in_uniform_region(const ExponentPoint& pt) {
    if (!in_square(pt)) return false;
    const auto e = endpoints(pt.n);
    const P2 p = as_p2(pt);
    if (pt.n == 2) {
        const P2 B = at(e, "B"), D = at(e, "D"), A0 = at(e, "A0"), Dp = at(e, "D'"), Bp = at(e, "B'");
        return in_hull(p, {B, D, A0, Dp, Bp}) && !on_segment(p, B, D) && !same(p, A0) &&
               !on_segment(p, Bp, Dp);
    }
    const P2 A = at(e, "A"), B = at(e, "B"), Bp = at(e, "B'"), Ap = at(e, "A'");
    return in_hull(p, {A, B, Bp, Ap}) && !on_segment(p, A, B) && !on_segment(p, Ap, Bp);
}

bool in_radial_triangle(const ExponentPoint& pt) {
    if (!in_square(pt)) return false;
    const auto e = endpoints(pt.n);
    const P2 p = as_p2(pt), B = at(e, "B"), C = at(e, "C"), Bp = at(e, "B'");
    return in_hull(p, {B, C, Bp}) && !on_segment(p, B, Bp) && !on_segment(p, B, C) &&
           !on_segment(p, C, Bp);
}

bool in_removed_set(const ExponentPoint& pt) {
    const auto e = endpoints(pt.n);
    const P2 p = as_p2(pt);
    const P2 E = at(e, "E"), Ep = at(e, "E'"), E0 = at(e, "E0");
    const bool diagonal = (on_segment(p, E, E0) || on_segment(p, E0, Ep)) && !same(p, E0);
    if (pt.n == 2)
        return diagonal || on_segment(p, at(e, "B"), at(e, "D")) || on_segment(p, at(e, "B'"), at(e, "D'")) ||
               same(p, at(e, "A0"));
    return diagonal || on_segment(p, at(e, "A"), at(e, "B")) || on_segment(p, at(e, "A'"), at(e, "B'")) ||
           same(p, at(e, "F")) || same(p, at(e, "F'"));
}

bool in_stripe(const ExponentPoint& pt) {
    if (!in_square(pt)) return false;
    const R d = pt.x - pt.y;
    return d >= R(0) && d <= R(2, pt.n) && !in_removed_set(pt);
}

bool in_upper_bound_gap(const ExponentPoint& pt) {
    if (pt.n == 2) return false;
    const auto e = endpoints(pt.n);
    const P2 p = as_p2(pt), E0 = at(e, "E0");
    if (same(p, E0)) return false;
    return in_hull(p, {at(e, "P*"), at(e, "Po"), E0}) || in_hull(p, {at(e, "P*'"), at(e, "Po'"), E0});
}

ClassificationReport classify(const ExponentPoint& pt) {
    require(pt.n >= 2, "classify: requires n >= 2");
    ClassificationReport r;
    r.point = pt;
    r.in_square = in_square(pt);
    r.uniform = in_uniform_region(pt);
    r.radial_triangle = in_radial_triangle(pt);
    r.stripe = in_stripe(pt);
    r.removed = in_removed_set(pt);
    r.upper_bound_gap = in_upper_bound_gap(pt);
    const auto e = endpoints(pt.n);
    const P2 p = as_p2(pt);
    for (const auto& [name, q] : e)
        if (q.x == pt.x && q.y == pt.y) r.endpoints_hit.push_back(name);
    auto hit = [&](const std::string& k) { return e.count(k) && same(p, at(e, k)); };
    if (r.uniform) r.lemmas.push_back("uniform");
    if (hit("B") || hit("B'") || (pt.n >= 3 && (hit("A") || hit("A'"))))
        r.lemmas.push_back("restricted_weak_type");
    if (r.stripe) r.lemmas.push_back("lower_bound_with_gamma");
    if (r.stripe && !r.upper_bound_gap) r.lemmas.push_back("upper_bound_with_gamma");
    const P2 C = at(e, "C"), B0 = at(e, "B0");
    if (on_segment(p, C, B0) && !same(p, C) && !same(p, B0)) r.lemmas.push_back("radial_angular_open_segment");
    if (same(p, C)) r.lemmas.push_back("radial_angular_endpoint_C");
    if (r.radial_triangle) r.lemmas.push_back("radial_triangle");
    r.z_power = R(-1) + R(pt.n, 2) * (pt.x - pt.y);
    r.gamma = gamma_exponent(pt);
    if (!r.in_square) r.notes.push_back("outside the unit square");
    if (pt.n >= 3 && (hit("F") || hit("F'"))) r.notes.push_back("isolated point excluded from S");
    if (hit("E0")) r.notes.push_back("E0 belongs to S; R~ excludes E0");
    if (r.lemmas.empty()) r.notes.push_back("no encoded estimate applies");
    return r;
}

std::string atlas_svg(int n, const std::optional<ArtifactHeader>& header) {
    const auto e = endpoints(n);
    auto f = [](const R& r) { return boost::rational_cast<double>(r); };
    auto pt = [&](const std::string& k) { return Point2{f(e.at(k).x), f(e.at(k).y)}; };
    SvgCanvas c(-0.02, 1.02, -0.02, 1.02);
    const double w = 2.0 / n;
    c.polygon({{0, 0}, {w, 0}, {1, 1 - w}, {1, 1}}, "#f2d024", 0.35, "#b8960c");
    if (n == 2) c.polygon({pt("B"), pt("D"), pt("A0"), pt("D'"), pt("B'")}, "#1f5fbf", 0.55, "#1f5fbf");
    else c.polygon({pt("A"), pt("B"), pt("B'"), pt("A'")}, "#1f5fbf", 0.55, "#1f5fbf");
    c.polygon({pt("B"), pt("C"), pt("B'")}, "#c8312b", 0.55, "#c8312b");
    if (n >= 3) {
        c.polygon({pt("P*"), pt("Po"), pt("E0")}, "#555555", 0.25, "#555555");
        c.polygon({pt("P*'"), pt("Po'"), pt("E0")}, "#555555", 0.25, "#555555");
    }
    c.polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, "#000", true, 1.0);
    for (const auto& [name, q] : e) {
        c.marker(f(q.x), f(q.y), 2.5, "#000");
        c.text(f(q.x) + 0.01, f(q.y) + 0.01, name, 11);
    }
    c.text(0.5, -0.015, "1/p", 12, "middle");
    c.text(-0.015, 0.5, "1/q", 12, "end");
    c.text(0.02, 0.98, "n = " + std::to_string(n), 13);
    return c.render(header);
}

} // namespace keller
