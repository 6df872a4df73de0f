#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keller/norms.hpp"
#include "keller/rigidity.hpp"

namespace keller {

enum class Theorem { T2_1, T2_2, T2_3, T2_5, T2_6, T2_7, T2_8, T2_9, DFS };

std::string to_string(Theorem t);
Theorem parse_theorem(const std::string& s);  ///< "t2.1" .. "t2.9", "dfs"; case-insensitive

/// Parameters of one eigenvalue enclosure. gamma may be kInf; `constant` is D (T2.1-T2.3)
/// or C0 (all others).
struct EnclosureSpec {
    Theorem theorem = Theorem::T2_1;
    double m = 1.0;
    double gamma = 0.5;
    double norm_value = 1.0;
    double constant = 0.5;
    int n = 1;
};

/// Spec with the documented default dimension, gamma and constant for the theorem:
/// D = 1/2 for T2.1 and C0 = 2 for n = 1 (T2.5, T2.7); 1.0 elsewhere (placeholder).
EnclosureSpec default_spec(Theorem t, double m, double norm_value);

/// True when spec.constant is not a value fixed by the theory (see default_spec).
bool constant_is_placeholder(const EnclosureSpec& spec);

/// Throws PreconditionError unless (n, m, gamma, norm_value, constant) is admissible.
void validate(const EnclosureSpec& spec);

/// dist(w, [0, inf)).
double dist_to_halfline(cplx w);

/// Case table: |z^2-m^2|^{1/2} |(z+m)/(z-m)|^{sgn Re z / 2} for (i, m>0); m for (ii, m>0);
/// |z| for iii or (i, m=0); 0 for iv or (ii, m=0).
double varkappa(RaClass c, double m, cplx z);

enum class KappaForm { power, dist };

/// power: varkappa |z^2-m^2|^{-1+n/(2r)}; dist: varkappa |z^2-m^2|^{-1/(2r)}
/// dist(z^2-m^2,[0,inf))^{-1+(n+1)/(2r)}. r may be kInf.
double kappa(KappaForm form, RaClass c, double m, int n, double r, cplx z);

/// Both sides of the enclosure inequality lhs <= rhs at z (after the theorem's own
/// rearrangement; for the disk theorems lhs = ratio threshold, rhs = |(z+m)/(z-m)|^{sgn Re z}).
struct Sides {
    double lhs = 0;
    double rhs = 0;
};

/// Throws SingularPointError on a singular locus of the formula.
Sides sides(const EnclosureSpec& spec, cplx z);

/// Relative slack granted to the closed inequality: member iff lhs <= rhs (1 + kMemberSlack).
inline constexpr double kMemberSlack = 1e-12;

bool member(const EnclosureSpec& spec, cplx z);

struct Disks {
    cplx c_plus;
    cplx c_minus;
    double radius = 0;
    double ratio = 0;  ///< k with boundary |(z+m)/(z-m)|^{+-1} = k
};

/// Apollonius disks {|(z+m)/(z-m)|^{+-1} >= k} for k > 1.
Disks disks_from_ratio(double m, double k);

/// Disks of T2.7, T2.9 or DFS. Throws if m <= 0 or the smallness assumption fails.
Disks disks(const EnclosureSpec& spec);

struct Boundary {
    std::vector<cplx> points;
    std::vector<int> component;  ///< component index per point, points ordered within each
    int component_count = 0;
    std::string diagnostic;      ///< non-empty when the region is empty or degenerate
};

struct Window {
    double re_min, re_max, im_min, im_max;
};

/// Equality locus of the enclosure. Cassini curves (T2.1, T2.2) and circles (disk theorems)
/// are parameterized exactly; other curves are traced on a grid over `window` and refined
/// onto the level set by bisection along grid edges.
Boundary boundary(const EnclosureSpec& spec, int samples,
                  const std::optional<Window>& window = std::nullopt);

/// Default tracing window for a theorem (the disk and Cassini cases ignore it).
Window default_window(const EnclosureSpec& spec);

struct GridSpec {
    Window window;
    int nx = 0;
    int ny = 0;
};

enum : std::uint8_t { kOutside = 0, kInside = 1, kSingular = 2 };

/// member() over an nx x ny grid of window points, row-major with iy outer; singular points
/// are tagged kSingular. OpenMP over rows.
std::vector<std::uint8_t> membership_grid(const EnclosureSpec& spec, const GridSpec& grid);

/// Serial reference for membership_grid.
std::vector<std::uint8_t> membership_grid_serial(const EnclosureSpec& spec, const GridSpec& grid);

/// Grid point (ix, iy) of a GridSpec.
cplx grid_point(const GridSpec& grid, int ix, int iy);

} // namespace keller
