#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parvol/geom_core.hpp"
#include "parvol/numeric.hpp"

namespace parvol {

struct ConcavityViolation {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double magnitude = 0.0;  // largest second difference inside the interval
};

struct ConcavityReport {
    double exponent = 1.0;
    std::vector<ConcavityViolation> violations;
    double t0 = 0.0;  // +inf when the last sample pair is still violating
    double tolerance = 0.0;

    bool concave() const { return violations.empty(); }
};

/// Second differences of V^exponent on the (possibly nonuniform) sample grid, flagged when
/// they exceed tol + (b[i-1] + 2 b[i] + b[i+1]) * max(1, exponent V^(exponent-1)).
ConcavityReport concavity_report(const VolumeProfile& profile, double exponent, double tol = 1e-9);

/// Largest |second difference| of V^exponent; zero for an affine root.
double affine_defect(const VolumeProfile& profile, double exponent);

struct KneserTriple {
    double t0 = 0.0;
    double t1 = 0.0;
    double lambda = 1.0;
    double excess = 0.0;  // lhs - rhs - slack; positive means failure
};

struct KneserResult {
    bool pass = true;
    std::size_t checked = 0;
    std::optional<KneserTriple> worst;
};

/// V(l t1) - V(l t0) <= l^n (V(t1) - V(t0)) over grid-aligned triples with l in {1.5, 2, 3}.
KneserResult kneser_check(const VolumeProfile& profile, int n, double tol = 1e-9);

struct MonotoneResult {
    bool pass = true;
    std::optional<std::size_t> first_drop;  // index i with deficit(i+1) < deficit(i) - slack
    std::vector<double> deficit;
};

/// Non-decrease of V(t) - t^n |B| across consecutive samples.
MonotoneResult monotone_deficit_check(const VolumeProfile& profile, double body_volume, int n, double tol = 1e-9);

struct IsoperimetricPath {
    std::vector<double> ratio;
    bool non_increasing = true;
    std::optional<std::size_t> first_increase;
    double limit = 0.0;           // n |B_2^n|^(1/n)
    double final_deviation = 0.0; // |ratio.back() / limit - 1|
};

/// |d(A+tB)| / |A+tB|^((n-1)/n) from the exact derivative when present, central differences otherwise.
IsoperimetricPath isoperimetric_path(const VolumeProfile& profile, double tol = 1e-9);

struct DctResult {
    bool pass = true;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs
};

/// |A+B| / per(A+B) >= |A| / per(A) + |B| / per(B) for convex polygons.
DctResult dct_check(std::span<const Vec2> a, std::span<const Vec2> b);

struct EquivalenceResult {
    ConcavityReport dilation;       // t -> |A + tB|
    ConcavityReport scaling;        // s -> |sA + B|
    ConcavityReport interpolation;  // l -> |(1-l)A + lB|
    ConcavityReport diagonal;       // u -> |(1+u)A + uB|
    bool agree() const;
};

/// Derives the four parametrizations from one profile. Samples at t = 0 are skipped where
/// the reparametrization is singular; the diagonal slice uses t < 1 only.
EquivalenceResult equivalence_check(const VolumeProfile& profile, double tol = 1e-9);
EquivalenceResult equivalence_check(const Scene& scene, const StructuringBody& body, const std::vector<double>& ts,
                                    const ProfileOptions& options = {}, double tol = 1e-9);

struct SchneiderEstimate {
    enum class Status { bracketed, upper_bound_only };
    double c_low = 0.0;
    double c_high = 0.0;
    std::int64_t samples = 0;
    Status status = Status::upper_bound_only;
};

/// c(A) = inf{t : A + t conv(A) = (1+t) conv(A)} by bisection on [0, n], testing coverage on
/// quasi-random points of (1+t) conv(A) plus its vertices, edge midpoints and centroid.
SchneiderEstimate schneider_c(const Scene& scene, std::int64_t samples = 4096, std::uint64_t seed = 1,
                              double resolution = 2e-4);

/// Area of a union of counter-clockwise convex polygons.
double convex_union_area(const std::vector<std::vector<Vec2>>& polys);

/// Exact |A + t conv(A)| for planar scenes of points, segments, boxes and convex polygons.
VolumeProfile hull_body_profile_2d(const Scene& scene, const std::vector<double>& ts);

struct HullGapResult {
    std::vector<double> gap;
    bool nonnegative = true;
    bool convex = true;                  // 2D only
    std::optional<double> decreasing_from;  // first t after which the gap never increases
    bool bounded = true;                 // gap * t^(3-n) does not grow past its early maximum
    double final_gap = 0.0;
};

/// gap = V_hull - V_A on a shared t grid. Throws ContractViolation when the grids differ.
HullGapResult hull_gap(const VolumeProfile& a, const VolumeProfile& hull, double tol = 1e-9);

struct FialaSample {
    double t = 0.0;
    double second_difference = 0.0;
    int euler = 0;
    bool pass = true;
};

struct FialaResult {
    bool pass = true;
    std::vector<FialaSample> samples;
};

/// V''(t) <= 2 pi (p - q) with a symmetric second difference of step delta. Throws
/// ContractViolation when some t lies within 10 delta of a critical radius.
FialaResult fiala_check(std::span<const Vec2> centers, const std::vector<double>& ts, double delta = 1e-3);

/// Drops grid points within `margin` of a critical radius.
std::vector<double> noncritical_grid(std::span<const Vec2> centers, const std::vector<double>& ts, double margin);

/// Smallest t at which the union of radius-t disks is connected (half the longest MST edge).
double connectivity_radius(std::span<const Vec2> centers);

/// Least-squares polynomial coefficients, lowest degree first.
std::vector<double> polynomial_fit(std::span<const double> x, std::span<const double> y, int degree);

}  // namespace parvol
