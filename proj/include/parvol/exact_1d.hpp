#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace parvol {

/// Disjoint sorted closed intervals. Points are degenerate intervals [x, x].
struct IntervalUnion {
    std::vector<std::pair<double, double>> intervals;

    /// Sorts and merges overlapping or touching intervals.
    static IntervalUnion from(std::vector<std::pair<double, double>> raw);
    static IntervalUnion points(const std::vector<double>& xs);
    double length() const;
    bool empty() const { return intervals.empty(); }
};

/// Continuous piecewise-affine function on [0, t_max]. Piece k starts at breakpoints[k]
/// and has slope slopes[k]; values[k] is the function value at breakpoints[k].
struct PiecewiseAffine1D {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    std::vector<double> values;
    double t_max = 0.0;

    double value(double t) const;
    /// Right derivative at t.
    double slope_at(double t) const;
};

/// Exact t -> |A + tB| on [0, t_max].
PiecewiseAffine1D parallel_profile_1d(const IntervalUnion& a, const IntervalUnion& b, double t_max);

struct ConcaveCertificate {
    bool concave = true;
    std::optional<double> first_violation;  // breakpoint where the slope increases
    std::optional<std::size_t> piece;       // index of the piece starting there
};

ConcaveCertificate concave_certificate_1d(const PiecewiseAffine1D& profile);

}  // namespace parvol
