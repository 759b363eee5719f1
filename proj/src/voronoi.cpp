#include "parvol/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "parvol/errors.hpp"
#include "parvol/geom_core.hpp"
#include "parvol/numeric.hpp"

namespace parvol {

namespace {

struct Face {
    int label = -1;  // neighbouring site, or -1 for a bounding-box face
    std::vector<Vec3> poly;
};

double polygon_area_3d(const std::vector<Vec3>& p) {
    Vec3 s{};
    for (std::size_t i = 1; i + 1 < p.size(); ++i) s = s + cross(p[i] - p[0], p[i + 1] - p[0]);
    return 0.5 * norm(s);
}

void push_unique(std::vector<Vec3>& pts, Vec3 p, double tol) {
    for (auto q : pts)
        if (norm(p - q) <= tol) return;
    pts.push_back(p);
}

// Keeps the part of the polyhedron with n . x <= d (n unit) and caps the cut.
void clip(std::vector<Face>& faces, Vec3 n, double d, int label, double eps) {
    std::vector<Face> out;
    std::vector<Vec3> cut;
    for (const auto& f : faces) {
        Face g{f.label, {}};
        const std::size_t m = f.poly.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 p = f.poly[i], q = f.poly[(i + 1) % m];
            const double sp = dot(n, p) - d, sq = dot(n, q) - d;
            if (sp <= eps) g.poly.push_back(p);
            if (std::abs(sp) <= eps) push_unique(cut, p, 10 * eps);
            if ((sp < -eps && sq > eps) || (sp > eps && sq < -eps)) {
                const Vec3 x = p + (sp / (sp - sq)) * (q - p);
                g.poly.push_back(x);
                push_unique(cut, x, 10 * eps);
            }
        }
        if (g.poly.size() >= 3 && polygon_area_3d(g.poly) > eps * eps) out.push_back(std::move(g));
    }
    if (cut.size() >= 3) {
        Vec3 c{};
        for (auto p : cut) c = c + p;
        c = (1.0 / static_cast<double>(cut.size())) * c;
        const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 u = cross(n, helper);
        u = (1.0 / norm(u)) * u;
        const Vec3 v = cross(n, u);
        std::sort(cut.begin(), cut.end(), [&](Vec3 a, Vec3 b) {
            return std::atan2(dot(a - c, v), dot(a - c, u)) < std::atan2(dot(b - c, v), dot(b - c, u));
        });
        if (polygon_area_3d(cut) > eps * eps) out.push_back({label, std::move(cut)});
    }
    faces = std::move(out);
}

std::vector<Face> box_faces(Vec3 c, double r) {
    auto corner = [&](int m) { return c + Vec3{m & 1 ? r : -r, m & 2 ? r : -r, m & 4 ? r : -r}; };
    const int quads[6][4] = {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1}, {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}};
    std::vector<Face> faces;
    for (const auto& q : quads) faces.push_back({-1, {corner(q[0]), corner(q[1]), corner(q[2]), corner(q[3])}});
    return faces;
}

double point_diameter(std::span<const Vec3> pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, norm(pts[i] - pts[j]));
    return d;
}

}  // namespace

StarCheck condition_star_check(std::span<const Vec3> points) {
    const ConvexPolytope hull = convex_hull_3d(points);
    auto original = [&](int k) {
        const Vec3 v = hull.vertices[k];
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i] == v) return static_cast<int>(i);
        return -1;
    };
    StarCheck r;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        const auto& loop = hull.facets[f].loop;
        const std::size_t m = loop.size();
        for (std::size_t e = 0; e < m; ++e) {
            const int a = loop[e], b = loop[(e + 1) % m];
            for (int c : loop) {
                if (c == a || c == b) continue;
                const Vec3 ca = hull.vertices[a] - hull.vertices[c];
                const Vec3 cb = hull.vertices[b] - hull.vertices[c];
                const double cosine = dot(ca, cb) / (norm(ca) * norm(cb));
                if (cosine > 1e-9) continue;
                r.pass = false;
                r.first = StarViolation{static_cast<int>(f), original(a), original(b), original(c), cosine,
                                        std::abs(cosine) <= 1e-9};
                return r;
            }
        }
    }
    return r;
}

VoronoiThreshold voronoi_t0(std::span<const Vec3> points) {
    const std::size_t m = points.size();
    if (m < 2) throw ContractViolation("voronoi_t0: needs at least two points");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (points[i] == points[j]) throw ContractViolation("voronoi_t0: duplicate points");

    VoronoiThreshold out;
    out.diameter = point_diameter(points);
    Vec3 center{};
    for (auto p : points) center = center + p;
    center = (1.0 / static_cast<double>(m)) * center;
    const double half = 50.0 * std::max(out.diameter, 1e-6) + out.diameter;
    const double eps = 1e-12 * (half + norm(center));

    out.cells.resize(m);
    detail::parallel_ranges(0, static_cast<long>(m), [&](int, long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            auto faces = box_faces(center, half);
            for (std::size_t j = 0; j < m; ++j) {
                if (static_cast<long>(j) == i) continue;
                Vec3 n = points[j] - points[i];
                const double len = norm(n);
                n = (1.0 / len) * n;
                const double d = dot(n, 0.5 * (points[i] + points[j]));
                clip(faces, n, d, static_cast<int>(j), eps);
            }
            VoronoiCell cell;
            cell.site = static_cast<int>(i);
            cell.bounded = true;
            for (const auto& f : faces) {
                if (f.label < 0) cell.bounded = false;
                else cell.neighbors.push_back(f.label);
                for (auto p : f.poly) push_unique(cell.vertices, p, 10 * eps);
            }
            std::sort(cell.neighbors.begin(), cell.neighbors.end());
            cell.containment_radius = std::numeric_limits<double>::infinity();
            if (cell.bounded) {
                cell.containment_radius = 0.0;
                for (auto v : cell.vertices) cell.containment_radius = std::max(cell.containment_radius, norm(v - points[i]));
            }
            out.cells[i] = std::move(cell);
        }
    });
    out.t0 = out.diameter;
    for (const auto& c : out.cells)
        if (c.bounded) out.t0 = std::max(out.t0, c.containment_radius);
    return out;
}

ConcavityReport star_concavity_verify(std::span<const Vec3> points, double t0, double T, double h, int steps,
                                      bool exploratory) {
    if (points.empty()) throw ContractViolation("star_concavity_verify: no points");
    if (!(t0 > 0.0) || !(T > t0) || steps < 3) throw ContractViolation("star_concavity_verify: need 0 < t0 < T and 3 steps");
    if (!exploratory && points.size() >= 4 && !condition_star_check(points).pass)
        throw ContractViolation("star_concavity_verify: the star condition fails");
    Scene scene{3, {}};
    for (auto p : points) scene.primitives.push_back(make_point(to_coords(p)));
    std::vector<double> ts;
    for (int k = 0; k < steps; ++k) ts.push_back(t0 + (T - t0) * k / (steps - 1));
    return concavity_report(grid_volume(scene, StructuringBody::ball(3), h, ts), 1.0 / 3.0);
}

}  // namespace parvol
