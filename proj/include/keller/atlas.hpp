#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "keller/common.hpp"
#include "keller/io.hpp"

namespace keller {

using Rational = boost::rational<long long>;

/// (1/p, 1/q) in the unit square for a dimension n >= 2.
struct ExponentPoint {
    Rational x;
    Rational y;
    int n = 2;
};

/// Parses "a/b", an integer, or "inf" (which maps to 0 when used as a reciprocal).
Rational parse_rational(const std::string& s);

/// 1/p for an exponent written as "6/5", "2", or "inf". Requires p >= 1.
Rational reciprocal_exponent(const std::string& p);

std::string to_string(const Rational& r);

/// Named endpoints for dimension n. A, A', F, F' exist only for n >= 3; D, D' only for n = 2.
/// P_*, P'_*, P_o, P'_o follow the parity of n. Keys: "A", "A'", "B", "B'", "A0", "B0", "C",
/// "D", "D'", "E", "E'", "E0", "F", "F'", "P*", "P*'", "Po", "Po'".
std::map<std::string, ExponentPoint> endpoints(int n);

/// max{0, 1 - (n+1)/2 (x-y), (n+1)/2 - n x, n y - (n-1)/2}.
Rational gamma_exponent(const ExponentPoint& pt);

bool in_square(const ExponentPoint& pt);
bool in_uniform_region(const ExponentPoint& pt);   ///< T_n
bool in_radial_triangle(const ExponentPoint& pt);  ///< P (open)
bool in_removed_set(const ExponentPoint& pt);      ///< S_0
bool in_stripe(const ExponentPoint& pt);           ///< S = stripe minus S_0
bool in_upper_bound_gap(const ExponentPoint& pt);  ///< R~ (empty for n = 2)

/// Estimates available at a point. Labels:
///   uniform                      |z|-uniform L^p -> L^q bound on T_n
///   restricted_weak_type         Lorentz endpoint bound at B, B' (and A, A' for n >= 3)
///   lower_bound_with_gamma       two-sided growth law, lower half, on S
///   upper_bound_with_gamma       upper half, on S minus R~
///   radial_angular_open_segment  radial-angular bound on the open segment (C, B0)
///   radial_angular_endpoint_C    Lorentz radial-angular bound at C
///   radial_triangle              bound for radial data on P
struct ClassificationReport {
    ExponentPoint point;
    bool in_square = false;
    bool uniform = false;
    bool radial_triangle = false;
    bool stripe = false;
    bool removed = false;
    bool upper_bound_gap = false;
    std::vector<std::string> endpoints_hit;
    std::vector<std::string> lemmas;
    Rational z_power;  ///< -1 + (n/2)(x - y)
    Rational gamma;
    std::vector<std::string> notes;
};

ClassificationReport classify(const ExponentPoint& pt);

/// Region diagram as an SVG 1.1 document: T_n, P, S and R~ shaded, endpoints labeled.
std::string atlas_svg(int n, const std::optional<ArtifactHeader>& header = std::nullopt);

} // namespace keller
