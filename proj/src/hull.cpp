#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "parvol/errors.hpp"
#include "parvol/geom_core.hpp"

namespace parvol {

namespace {

bool lex_less(Vec3 a, Vec3 b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

// Scale factor bringing coordinates into the range where kGeomTol is meaningful.
double rescale_factor(std::span<const Vec3> pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    return m > kCoordRange ? kCoordRange / m : 1.0;
}

std::string degeneracy_message(int affine_dim, int dim) {
    return "convex hull: input is degenerate (affine dimension " + std::to_string(affine_dim) +
           " in R^" + std::to_string(dim) + ")";
}

int affine_dim_3d(std::span<const Vec3> pts, double tol) {
    if (pts.empty()) return -1;
    const Vec3 o = pts[0];
    std::vector<Vec3> basis;
    for (const auto& p : pts) {
        Vec3 v = p - o;
        for (const auto& b : basis) v = v - dot(v, b) * b;
        const double len = norm(v);
        if (len > tol) {
            basis.push_back((1.0 / len) * v);
            if (basis.size() == 3) break;
        }
    }
    return static_cast<int>(basis.size());
}

}  // namespace

int affine_dimension(std::span<const Coords> points, int dim, double tol) {
    if (points.empty()) return -1;
    const Coords o = points[0];
    std::vector<Coords> basis;
    for (const auto& p : points) {
        Coords v = p - o;
        for (int i = dim; i < kMaxDim; ++i) v[i] = 0.0;
        for (const auto& b : basis) v = v - dot(v, b) * b;
        const double len = norm(v);
        if (len > tol) {
            basis.push_back((1.0 / len) * v);
            if (static_cast<int>(basis.size()) == dim) break;
        }
    }
    return static_cast<int>(basis.size());
}

ConvexPolytope convex_hull_2d(std::span<const Vec2> input) {
    std::vector<Vec3> as3;
    as3.reserve(input.size());
    for (auto p : input) as3.push_back({p.x, p.y, 0.0});
    const double s = rescale_factor(as3);

    std::vector<Vec2> pts(input.begin(), input.end());
    for (auto& p : pts) p = s * p;
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    {
        std::vector<Vec3> p3;
        for (auto p : pts) p3.push_back({p.x, p.y, 0.0});
        const int ad = affine_dim_3d(p3, kGeomTol);
        if (ad < 2) throw DegeneracyError(degeneracy_message(ad, 2), ad);
    }

    // Andrew's monotone chain; points within kGeomTol of a hull edge are dropped.
    auto turns_left = [](Vec2 a, Vec2 b, Vec2 c) {
        const double len = norm(b - a);
        return orient2d(a, b, c) > kGeomTol * len;
    };
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], pts[i])) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && !turns_left(hull[k - 2], hull[k - 1], pts[i - 1])) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);

    ConvexPolytope poly;
    poly.dim = 2;
    for (auto p : hull) poly.vertices.push_back({p.x / s, p.y / s, 0.0});
    // hull[0] is the lexicographically smallest; the ring is counter-clockwise.
    std::vector<int> ring(hull.size());
    std::iota(ring.begin(), ring.end(), 0);
    std::vector<int> order(hull.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lex_less(poly.vertices[a], poly.vertices[b]); });
    std::vector<int> remap(hull.size());
    std::vector<Vec3> sorted(hull.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = static_cast<int>(i);
        sorted[i] = poly.vertices[order[i]];
    }
    poly.vertices = sorted;
    const int nv = static_cast<int>(ring.size());
    for (int i = 0; i < nv; ++i) {
        const int a = remap[i];
        const int b = remap[(i + 1) % nv];
        const Vec3 d = poly.vertices[b] - poly.vertices[a];
        Vec3 n{d.y, -d.x, 0.0};
        n = (1.0 / norm(n)) * n;
        poly.facets.push_back({n, dot(n, poly.vertices[a]), {a, b}});
    }
    return poly;
}

namespace {

struct Tri {
    int v[3];
    Vec3 n;
    double off;
    bool alive = true;
};

Tri make_tri(const std::vector<Vec3>& p, int a, int b, int c) {
    Tri t{{a, b, c}, {}, 0.0, true};
    Vec3 n = cross(p[b] - p[a], p[c] - p[a]);
    const double len = norm(n);
    t.n = (1.0 / len) * n;
    t.off = dot(t.n, p[a]);
    return t;
}

}  // namespace

ConvexPolytope convex_hull_3d(std::span<const Vec3> input) {
    const double s = rescale_factor(input);
    std::vector<Vec3> pts;
    pts.reserve(input.size());
    for (auto p : input) pts.push_back(s * p);
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const int ad = affine_dim_3d(pts, kGeomTol);
    if (ad < 3) throw DegeneracyError(degeneracy_message(ad, 3), ad);

    // Initial tetrahedron from extreme choices.
    const int n = static_cast<int>(pts.size());
    int i0 = 0, i1 = 0, i2 = 0, i3 = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = norm(pts[i] - pts[i0]);
        if (d > best) best = d, i1 = i;
    }
    best = -1.0;
    const Vec3 dir = (1.0 / norm(pts[i1] - pts[i0])) * (pts[i1] - pts[i0]);
    for (int i = 0; i < n; ++i) {
        const Vec3 v = pts[i] - pts[i0];
        const double d = norm(v - dot(v, dir) * dir);
        if (d > best) best = d, i2 = i;
    }
    best = -1.0;
    Vec3 pn = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
    pn = (1.0 / norm(pn)) * pn;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(dot(pn, pts[i] - pts[i0]));
        if (d > best) best = d, i3 = i;
    }

    std::vector<Tri> tris;
    if (dot(pn, pts[i3] - pts[i0]) > 0) std::swap(i1, i2);
    tris.push_back(make_tri(pts, i0, i1, i2));
    tris.push_back(make_tri(pts, i0, i3, i1));
    tris.push_back(make_tri(pts, i1, i3, i2));
    tris.push_back(make_tri(pts, i2, i3, i0));

    const Vec3 c0 = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return norm(pts[a] - c0) > norm(pts[b] - c0); });

    for (int pi : order) {
        if (pi == i0 || pi == i1 || pi == i2 || pi == i3) continue;
        const Vec3 p = pts[pi];
        std::vector<int> visible;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t)
            if (tris[t].alive && dot(tris[t].n, p) - tris[t].off > kGeomTol) visible.push_back(t);
        if (visible.empty()) continue;

        // Directed edges of visible faces; horizon edges have no visible reverse twin.
        std::map<std::pair<int, int>, int> edge_count;
        for (int t : visible)
            for (int e = 0; e < 3; ++e) edge_count[{tris[t].v[e], tris[t].v[(e + 1) % 3]}]++;
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, cnt] : edge_count)
            if (!edge_count.count({edge.second, edge.first})) horizon.push_back(edge);
        for (int t : visible) tris[t].alive = false;
        for (const auto& [a, b] : horizon) tris.push_back(make_tri(pts, a, b, pi));
    }

    std::vector<Tri> faces;
    for (const auto& t : tris)
        if (t.alive) faces.push_back(t);
    const int nf = static_cast<int>(faces.size());

    // Adjacency through directed edges.
    std::map<std::pair<int, int>, int> owner;
    for (int f = 0; f < nf; ++f)
        for (int e = 0; e < 3; ++e) owner[{faces[f].v[e], faces[f].v[(e + 1) % 3]}] = f;

    // Merge coplanar neighbours into polygonal facets.
    std::vector<int> group(nf);
    std::iota(group.begin(), group.end(), 0);
    auto find = [&](int x) {
        while (group[x] != x) x = group[x] = group[group[x]];
        return x;
    };
    for (int f = 0; f < nf; ++f) {
        for (int e = 0; e < 3; ++e) {
            const int a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
            const int g = owner.at({b, a});
            int opp = -1;
            for (int k = 0; k < 3; ++k)
                if (faces[g].v[k] != a && faces[g].v[k] != b) opp = faces[g].v[k];
            if (std::abs(dot(faces[f].n, pts[opp]) - faces[f].off) <= kGeomTol) group[find(f)] = find(g);
        }
    }

    std::map<int, std::vector<int>> members;
    for (int f = 0; f < nf; ++f) members[find(f)].push_back(f);

    struct RawFacet {
        Vec3 n;
        std::vector<int> loop;
    };
    std::vector<RawFacet> raw;
    for (const auto& [root, fs] : members) {
        Vec3 nsum{};
        std::map<int, int> next;
        for (int f : fs) {
            nsum = nsum + faces[f].n;
            for (int e = 0; e < 3; ++e) {
                const int a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                if (find(owner.at({b, a})) != root) next[a] = b;
            }
        }
        RawFacet rf;
        rf.n = (1.0 / norm(nsum)) * nsum;
        const int start = next.begin()->first;
        int cur = start;
        do {
            rf.loop.push_back(cur);
            cur = next.at(cur);
        } while (cur != start && rf.loop.size() <= next.size());
        raw.push_back(std::move(rf));
    }

    // Drop loop vertices collinear with their neighbours (points on hull edges).
    std::vector<int> use_count(n, 0);
    for (auto& rf : raw) {
        bool changed = true;
        while (changed && rf.loop.size() > 3) {
            changed = false;
            const int m = static_cast<int>(rf.loop.size());
            for (int i = 0; i < m; ++i) {
                const Vec3 a = pts[rf.loop[(i + m - 1) % m]], b = pts[rf.loop[i]], c = pts[rf.loop[(i + 1) % m]];
                const double len = norm(c - a);
                if (norm(cross(b - a, c - a)) <= kGeomTol * len) {
                    rf.loop.erase(rf.loop.begin() + i);
                    changed = true;
                    break;
                }
            }
        }
        for (int v : rf.loop) use_count[v]++;
    }

    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
        if (use_count[i] > 0) kept.push_back(i);
    std::sort(kept.begin(), kept.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    std::vector<int> remap(n, -1);
    ConvexPolytope poly;
    poly.dim = 3;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        remap[kept[i]] = static_cast<int>(i);
        poly.vertices.push_back((1.0 / s) * pts[kept[i]]);
    }
    for (auto& rf : raw) {
        for (auto& v : rf.loop) v = remap[v];
        std::rotate(rf.loop.begin(), std::min_element(rf.loop.begin(), rf.loop.end()), rf.loop.end());
        double off = -1e300;
        for (int v : rf.loop) off = std::max(off, dot(rf.n, poly.vertices[v]));
        poly.facets.push_back({rf.n, off, rf.loop});
    }
    std::sort(poly.facets.begin(), poly.facets.end(),
              [](const ConvexPolytope::Facet& a, const ConvexPolytope::Facet& b) { return a.loop < b.loop; });

    std::map<std::pair<int, int>, std::vector<int>> edge_facets;
    for (int f = 0; f < static_cast<int>(poly.facets.size()); ++f) {
        const auto& loop = poly.facets[f].loop;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const int a = loop[i], b = loop[(i + 1) % loop.size()];
            edge_facets[{std::min(a, b), std::max(a, b)}].push_back(f);
        }
    }
    for (const auto& [e, fs] : edge_facets) {
        if (fs.size() != 2) continue;
        poly.edges.push_back({e.first, e.second, fs[0], fs[1]});
    }
    return poly;
}

ConvexPolytope convex_hull(std::span<const Coords> points, int dim) {
    if (dim == 2) {
        std::vector<Vec2> p;
        for (const auto& c : points) p.push_back(to_vec2(c));
        if (p.size() < 3) {
            const int ad = affine_dimension(points, 2);
            throw DegeneracyError(degeneracy_message(ad, 2), ad);
        }
        return convex_hull_2d(p);
    }
    if (dim == 3) {
        std::vector<Vec3> p;
        for (const auto& c : points) p.push_back(to_vec3(c));
        if (p.size() < 4) {
            const int ad = affine_dimension(points, 3);
            throw DegeneracyError(degeneracy_message(ad, 3), ad);
        }
        return convex_hull_3d(p);
    }
    throw ContractViolation("convex_hull: dimension must be 2 or 3");
}

double ConvexPolytope::facet_area(std::size_t k) const {
    const auto& f = facets.at(k);
    if (dim == 2) return norm(vertices[f.loop[1]] - vertices[f.loop[0]]);
    Vec3 acc{};
    for (std::size_t i = 0; i < f.loop.size(); ++i)
        acc = acc + cross(vertices[f.loop[i]], vertices[f.loop[(i + 1) % f.loop.size()]]);
    return 0.5 * std::abs(dot(acc, f.normal));
}

double ConvexPolytope::volume() const {
    // Divergence theorem: sum over facets of offset * area / dim.
    double v = 0.0;
    for (std::size_t k = 0; k < facets.size(); ++k) v += facets[k].offset * facet_area(k);
    return v / dim;
}

double ConvexPolytope::boundary_measure() const {
    double s = 0.0;
    for (std::size_t k = 0; k < facets.size(); ++k) s += facet_area(k);
    return s;
}

bool ConvexPolytope::contains(Vec3 p, double tol) const {
    for (const auto& f : facets)
        if (dot(f.normal, p) - f.offset > tol) return false;
    return true;
}

namespace {

double point_segment_distance(Vec3 p, Vec3 a, Vec3 b) {
    const Vec3 e = b - a;
    const double ee = dot(e, e);
    double s = ee > 0 ? dot(p - a, e) / ee : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return norm(p - (a + s * e));
}

}  // namespace

double ConvexPolytope::distance(Vec3 p) const {
    if (contains(p, 0.0)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) {
        const double h = dot(f.normal, p) - f.offset;
        if (h <= 0) continue;
        if (dim == 2) {
            best = std::min(best, point_segment_distance(p, vertices[f.loop[0]], vertices[f.loop[1]]));
            continue;
        }
        const Vec3 q = p - h * f.normal;
        bool inside = true;
        const std::size_t m = f.loop.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 a = vertices[f.loop[i]], b = vertices[f.loop[(i + 1) % m]];
            if (dot(cross(b - a, q - a), f.normal) < 0) {
                inside = false;
                break;
            }
        }
        if (inside) {
            best = std::min(best, h);
        } else {
            for (std::size_t i = 0; i < m; ++i)
                best = std::min(best, point_segment_distance(p, vertices[f.loop[i]], vertices[f.loop[(i + 1) % m]]));
        }
    }
    return best;
}

std::vector<Vec2> ConvexPolytope::ring() const {
    std::vector<Vec2> r;
    for (const auto& f : facets) r.push_back({vertices[f.loop[0]].x, vertices[f.loop[0]].y});
    return r;
}

Vec3 ConvexPolytope::centroid_of_vertices() const {
    Vec3 c{};
    for (const auto& v : vertices) c = c + v;
    return (1.0 / static_cast<double>(vertices.size())) * c;
}

}  // namespace parvol
