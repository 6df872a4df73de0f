#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "keller/common.hpp"

namespace keller {

enum class Interpolation { piecewise_constant, piecewise_linear };

/// Radial profile f(r) on (0, r_last], zero beyond r_last.
/// piecewise_constant: f = value[i] on (r[i-1], r[i]] with r[-1] = 0.
/// piecewise_linear: f = value[0] on (0, r[0]], linear between consecutive samples.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> value;
    int n = 1;
    Interpolation interp = Interpolation::piecewise_constant;

    /// Throws PreconditionError unless radii are positive and strictly increasing and values
    /// are finite and >= 0.
    void validate() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (integral |f|^p dx)^{1/p} by the trapezoid rule on the grid x; p = kInf gives max |f|.
double lp_norm(std::span<const double> x, std::span<const double> f, double p);

/// Refines a piecewise-linear profile into `pieces` piecewise-constant steps (midpoint values);
/// piecewise-constant input is returned unchanged.
RadialProfile to_piecewise_constant(const RadialProfile& f, int pieces = 4096);

/// (integral_0^inf |f|^p r^{n-1} dr)^{1/p}, exact for piecewise-constant profiles.
double lp_radial_norm(const RadialProfile& f, double p);

/// (p integral_0^inf t^{q-1} mu{f >= t}^{q/p} dt)^{1/q} with mu = r^{n-1} dr; 1 <= p, q < inf.
double lorentz_radial_norm(const RadialProfile& f, double p, double q);

/// sup_{R > 0} integral_R^inf r (r^2 - R^2)^{-1/2} w(r) dr.
double mt_norm(const RadialProfile& w);

/// Reads a two-column CSV (r, value); a non-numeric first row is treated as a header.
RadialProfile load_profile_csv(const std::string& path, int n,
                               Interpolation interp = Interpolation::piecewise_constant);

} // namespace keller
