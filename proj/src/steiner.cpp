#include "parvol/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parvol/errors.hpp"

namespace parvol {

double SteinerPolynomial::operator()(double t) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
    return v;
}

double SteinerPolynomial::derivative(double t, int order) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
        double f = 1.0;
        for (int j = 0; j < order; ++j) f *= static_cast<double>(k - j);
        v = v * t + f * c[k];
    }
    return v;
}

double polygon_area(std::span<const Vec2> ring) {
    double a = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) a += cross(ring[i], ring[(i + 1) % ring.size()]);
    return 0.5 * a;
}

double polygon_perimeter(std::span<const Vec2> ring) {
    if (ring.size() < 2) return 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) p += norm(ring[(i + 1) % ring.size()] - ring[i]);
    return p;
}

std::vector<Vec2> convex_ring(std::span<const Vec2> cycle) {
    std::vector<Vec2> v;
    for (auto p : cycle)
        if (v.empty() || !(p == v.back())) v.push_back(p);
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    if (v.empty()) throw ContractViolation("convex polygon: no vertices");

    double scale = 0.0;
    for (auto p : v) scale = std::max({scale, std::abs(p.x - v[0].x), std::abs(p.y - v[0].y)});
    const double tol = kGeomTol * std::max(1.0, scale * scale);

    if (std::abs(polygon_area(v)) <= tol) {
        // Degenerate: a point or a segment; the ring is its two extreme points.
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].x < v[lo].x || (v[i].x == v[lo].x && v[i].y < v[lo].y)) lo = i;
            if (v[i].x > v[hi].x || (v[i].x == v[hi].x && v[i].y > v[hi].y)) hi = i;
        }
        for (auto p : v)
            if (std::abs(orient2d(v[lo], v[hi], p)) > tol) throw ContractViolation("convex polygon: zero area but not collinear");
        if (v[lo] == v[hi]) return {v[lo]};
        return {v[lo], v[hi]};
    }
    if (polygon_area(v) < 0) std::reverse(v.begin(), v.end());

    std::vector<Vec2> ring;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double o = orient2d(v[(i + m - 1) % m], v[i], v[(i + 1) % m]);
        if (o < -tol) throw ContractViolation("convex polygon: vertex cycle is not convex");
        if (o > tol) ring.push_back(v[i]);
    }
    // A convex cycle turns exactly once.
    double turning = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2 a = ring[(i + 1) % ring.size()] - ring[i];
        const Vec2 b = ring[(i + 2) % ring.size()] - ring[(i + 1) % ring.size()];
        turning += std::atan2(cross(a, b), dot(a, b));
    }
    if (std::abs(turning - 2.0 * M_PI) > 1e-6) throw ContractViolation("convex polygon: vertex cycle is not simple");
    std::rotate(ring.begin(),
                std::min_element(ring.begin(), ring.end(),
                                 [](Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }),
                ring.end());
    return ring;
}

SteinerPolynomial steiner_polynomial_2d(std::span<const Vec2> convex_cycle) {
    const auto ring = convex_ring(convex_cycle);
    return {2, {polygon_area(ring), polygon_perimeter(ring), M_PI}};
}

SteinerPolynomial steiner_polynomial_disk(double radius) {
    if (!(radius >= 0.0)) throw ContractViolation("steiner_polynomial_disk: negative radius");
    return {2, {M_PI * radius * radius, 2.0 * M_PI * radius, M_PI}};
}

SteinerPolynomial steiner_polynomial_3d(const ConvexPolytope& k) {
    if (k.dim != 3 || k.facets.size() < 4) throw ContractViolation("steiner_polynomial_3d: invalid polytope");
    double m = 0.0;
    for (const auto& e : k.edges) {
        const double len = norm(k.vertices[e.a] - k.vertices[e.b]);
        const double c = std::clamp(dot(k.facets[e.f1].normal, k.facets[e.f2].normal), -1.0, 1.0);
        m += len * std::acos(c);
    }
    return {3, {k.volume(), k.boundary_measure(), 0.5 * m, 4.0 * M_PI / 3.0}};
}

SteinerPolynomial steiner_polynomial_3d(std::span<const Vec3> points) {
    if (points.empty()) throw ContractViolation("steiner_polynomial_3d: no points");
    std::vector<Coords> c;
    for (auto p : points) c.push_back(to_coords(p));
    const int ad = affine_dimension(c, 3);
    const double ball = 4.0 * M_PI / 3.0;
    if (ad == 0) return {3, {0.0, 0.0, 0.0, ball}};
    if (ad == 1) {
        double len = 0.0;
        for (auto p : points)
            for (auto q : points) len = std::max(len, norm(p - q));
        return {3, {0.0, 0.0, M_PI * len, ball}};
    }
    if (ad == 2) {
        // Flat convex set: two-sided area, edges with exterior angle pi.
        const Vec3 o = points[0];
        Vec3 u{}, nrm{};
        for (auto p : points)
            if (norm(p - o) > kGeomTol) {
                u = (1.0 / norm(p - o)) * (p - o);
                break;
            }
        double best = 0.0;
        for (auto p : points) {
            const Vec3 w = cross(u, p - o);
            if (norm(w) > best) best = norm(w), nrm = (1.0 / norm(w)) * w;
        }
        const Vec3 v = cross(nrm, u);
        std::vector<Vec2> flat;
        for (auto p : points) flat.push_back({dot(p - o, u), dot(p - o, v)});
        const auto ring = convex_hull_2d(flat).ring();
        const double area = std::abs(polygon_area(ring));
        return {3, {0.0, 2.0 * area, 0.5 * M_PI * polygon_perimeter(ring), ball}};
    }
    return steiner_polynomial_3d(convex_hull_3d(points));
}

CounterexamplePolynomial counterexample_polynomial_3d(double l, int n) {
    if (!(l >= 2.0)) throw std::domain_error("counterexample_polynomial_3d: l must be >= 2");
    if (n < 3) throw std::domain_error("counterexample_polynomial_3d: n must be >= 3");
    const double nn = n;
    CounterexamplePolynomial r;
    r.a0 = std::ldexp(1.0, n);
    r.a1 = nn * std::ldexp(1.0, n);
    r.a2 = std::ldexp(1.0, n - 3) * M_PI * (2.0 * (l - 1.0) / ((nn - 1.0) * (nn - 2.0)) + nn * (nn - 1.0));
    r.determinant = nn / (nn - 1.0) * r.a0 * 2.0 * r.a2 - r.a1 * r.a1;
    r.nonconcave_at_zero = r.determinant > 0.0;
    return r;
}

std::vector<Vec2> minkowski_sum_convex(std::span<const Vec2> p, std::span<const Vec2> q) {
    const auto rp = convex_ring(p);
    const auto rq = convex_ring(q);
    // Both rings start at their lowest (then leftmost) vertex, so edge directions
    // increase monotonically in angle from 0 to 2 pi.
    auto edges = [](const std::vector<Vec2>& r) {
        std::vector<Vec2> e;
        if (r.size() < 2) return e;
        for (std::size_t i = 0; i < r.size(); ++i) e.push_back(r[(i + 1) % r.size()] - r[i]);
        return e;
    };
    auto start = [](const std::vector<Vec2>& r) {
        return *std::min_element(r.begin(), r.end(), [](Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
    };
    auto rot = [](std::vector<Vec2> r) {
        std::rotate(r.begin(),
                    std::min_element(r.begin(), r.end(),
                                     [](Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }),
                    r.end());
        return r;
    };
    const auto ep = edges(rot(rp));
    const auto eq = edges(rot(rq));
    auto angle = [](Vec2 e) {
        const double a = std::atan2(e.y, e.x);
        return a < 0 ? a + 2.0 * M_PI : a;
    };
    std::vector<Vec2> out{start(rp) + start(rq)};
    std::size_t i = 0, j = 0;
    while (i < ep.size() || j < eq.size()) {
        Vec2 step;
        if (j >= eq.size() || (i < ep.size() && angle(ep[i]) <= angle(eq[j]))) step = ep[i++];
        else step = eq[j++];
        out.push_back(out.back() + step);
    }
    out.pop_back();
    if (out.empty()) out.push_back(start(rp) + start(rq));
    return out;
}

double mixed_area(std::span<const Vec2> p, std::span<const Vec2> q) {
    const auto s = minkowski_sum_convex(p, q);
    const double ap = std::abs(polygon_area(convex_ring(p)));
    const double aq = std::abs(polygon_area(convex_ring(q)));
    return 0.5 * (std::abs(polygon_area(s)) - ap - aq);
}

double mixed_area_disk(std::span<const Vec2> p, double radius) {
    if (!(radius >= 0.0)) throw ContractViolation("mixed_area_disk: negative radius");
    return 0.5 * radius * polygon_perimeter(convex_ring(p));
}

}  // namespace parvol
