#include "parvol/exact_1d.hpp"

#include <algorithm>
#include <cmath>

#include "parvol/errors.hpp"

namespace parvol {

IntervalUnion IntervalUnion::from(std::vector<std::pair<double, double>> raw) {
    for (const auto& [a, b] : raw)
        if (!(a <= b)) throw ContractViolation("interval union: interval with lo > hi");
    std::sort(raw.begin(), raw.end());
    IntervalUnion out;
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.first <= out.intervals.back().second)
            out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
        else
            out.intervals.push_back(iv);
    }
    return out;
}

IntervalUnion IntervalUnion::points(const std::vector<double>& xs) {
    std::vector<std::pair<double, double>> raw;
    for (double x : xs) raw.emplace_back(x, x);
    return from(std::move(raw));
}

double IntervalUnion::length() const {
    double s = 0.0;
    for (const auto& [a, b] : intervals) s += b - a;
    return s;
}

double PiecewiseAffine1D::value(double t) const {
    if (t < 0.0) throw ContractViolation("piecewise profile: t must be >= 0");
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breakpoints.begin() - 1, 0));
    return values[k] + slopes[k] * (t - breakpoints[k]);
}

double PiecewiseAffine1D::slope_at(double t) const {
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breakpoints.begin() - 1, 0));
    return slopes[k];
}

namespace {

// Moving interval [lo0 + t lo1, hi0 + t hi1].
struct Moving {
    double lo0, lo1, hi0, hi1;
    double lo(double t) const { return lo0 + t * lo1; }
    double hi(double t) const { return hi0 + t * hi1; }
};

// Slope of the union measure at a time strictly inside a piece.
double slope_at_time(const std::vector<Moving>& ivs, double t) {
    std::vector<std::size_t> order(ivs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ivs[a].lo(t) < ivs[b].lo(t); });
    double slope = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const Moving& first = ivs[order[i]];
        double reach = first.hi(t);
        double reach_slope = first.hi1;
        const double left_slope = first.lo1;
        std::size_t j = i + 1;
        while (j < order.size() && ivs[order[j]].lo(t) <= reach) {
            const Moving& m = ivs[order[j]];
            if (m.hi(t) > reach) reach = m.hi(t), reach_slope = m.hi1;
            ++j;
        }
        slope += reach_slope - left_slope;
        i = j;
    }
    return slope;
}

double union_length_at(const std::vector<Moving>& ivs, double t) {
    std::vector<std::pair<double, double>> raw;
    for (const auto& m : ivs) raw.emplace_back(m.lo(t), m.hi(t));
    return IntervalUnion::from(std::move(raw)).length();
}

}  // namespace

PiecewiseAffine1D parallel_profile_1d(const IntervalUnion& a, const IntervalUnion& b, double t_max) {
    if (a.empty() || b.empty()) throw ContractViolation("parallel_profile_1d: A and B must be nonempty");
    if (!(t_max > 0.0)) throw ContractViolation("parallel_profile_1d: t_max must be positive");

    std::vector<Moving> ivs;
    for (const auto& [ai, bi] : a.intervals)
        for (const auto& [cj, dj] : b.intervals) ivs.push_back({ai, cj, bi, dj});

    // Collision times of any two endpoints.
    std::vector<double> events{0.0, t_max};
    auto collide = [&](double p0, double p1, double q0, double q1) {
        if (p1 == q1) return;
        const double t = (q0 - p0) / (p1 - q1);
        if (t > 0.0 && t < t_max) events.push_back(t);
    };
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        for (std::size_t j = i + 1; j < ivs.size(); ++j) {
            const Moving& p = ivs[i];
            const Moving& q = ivs[j];
            collide(p.lo0, p.lo1, q.lo0, q.lo1);
            collide(p.hi0, p.hi1, q.hi0, q.hi1);
            collide(p.lo0, p.lo1, q.hi0, q.hi1);
            collide(p.hi0, p.hi1, q.lo0, q.lo1);
        }
    }
    std::sort(events.begin(), events.end());
    std::vector<double> ts;
    for (double t : events) {
        if (ts.empty() || t - ts.back() > 1e-12 * std::max(1.0, std::abs(t))) ts.push_back(t);
    }
    if (ts.back() < t_max) ts.back() = t_max;

    PiecewiseAffine1D out;
    out.t_max = t_max;
    double v = union_length_at(ivs, 0.0);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double s = slope_at_time(ivs, 0.5 * (ts[k] + ts[k + 1]));
        if (!out.slopes.empty() && out.slopes.back() == s) {
            v += s * (ts[k + 1] - ts[k]);
            continue;
        }
        out.breakpoints.push_back(ts[k]);
        out.slopes.push_back(s);
        out.values.push_back(v);
        v += s * (ts[k + 1] - ts[k]);
    }
    return out;
}

ConcaveCertificate concave_certificate_1d(const PiecewiseAffine1D& profile) {
    ConcaveCertificate c;
    for (std::size_t k = 1; k < profile.slopes.size(); ++k) {
        if (profile.slopes[k] > profile.slopes[k - 1]) {
            c.concave = false;
            c.first_violation = profile.breakpoints[k];
            c.piece = k;
            break;
        }
    }
    return c;
}

}  // namespace parvol
