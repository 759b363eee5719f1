#include "parvol/disks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "parvol/errors.hpp"

namespace parvol {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kCritTol = 1e-12;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::vector<Vec2> unique_points(std::span<const Vec2> pts) {
    std::vector<Vec2> v(pts.begin(), pts.end());
    std::sort(v.begin(), v.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<BoundaryArc> boundary_arcs(std::span<const Disk> disks) {
    const int n = static_cast<int>(disks.size());
    std::vector<bool> hidden(n, false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n && !hidden[i]; ++j) {
            if (i == j) continue;
            const double d = norm(disks[i].center - disks[j].center);
            const bool identical = d == 0.0 && disks[i].radius == disks[j].radius;
            if (identical ? j < i : d + disks[i].radius <= disks[j].radius) hidden[i] = true;
        }
    }

    std::vector<BoundaryArc> arcs;
    for (int i = 0; i < n; ++i) {
        if (hidden[i] || disks[i].radius <= 0.0) continue;
        const double ri = disks[i].radius;
        std::vector<std::pair<double, double>> covered;
        bool fully = false;
        for (int j = 0; j < n && !fully; ++j) {
            if (j == i || hidden[j]) continue;
            const Vec2 dv = disks[j].center - disks[i].center;
            const double d = norm(dv);
            const double rj = disks[j].radius;
            if (d >= ri + rj || d + rj <= ri) continue;
            const double c = std::clamp((d * d + ri * ri - rj * rj) / (2.0 * d * ri), -1.0, 1.0);
            const double half = std::acos(c);
            if (half >= M_PI) {
                fully = true;
                break;
            }
            const double phi = std::atan2(dv.y, dv.x);
            const double lo = wrap(phi - half);
            const double hi = lo + 2.0 * half;
            if (hi <= kTwoPi) {
                covered.emplace_back(lo, hi);
            } else {
                covered.emplace_back(lo, kTwoPi);
                covered.emplace_back(0.0, hi - kTwoPi);
            }
        }
        if (fully) continue;
        if (covered.empty()) {
            arcs.push_back({i, 0.0, kTwoPi});
            continue;
        }
        std::sort(covered.begin(), covered.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& iv : covered) {
            if (!merged.empty() && iv.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, iv.second);
            else
                merged.push_back(iv);
        }
        // Free arcs are the gaps between merged covered intervals, cyclically.
        for (std::size_t k = 0; k < merged.size(); ++k) {
            const double from = merged[k].second;
            const double to = k + 1 < merged.size() ? merged[k + 1].first : merged[0].first + kTwoPi;
            if (to - from > 0.0) arcs.push_back({i, from, to});
        }
    }
    return arcs;
}

DiskUnionMeasure disk_union_measure(std::span<const Disk> disks) {
    if (disks.empty()) return {};
    // Work relative to the mean center so the Green integral does not cancel badly.
    Vec2 mean{};
    for (const auto& d : disks) mean = mean + d.center;
    mean = (1.0 / static_cast<double>(disks.size())) * mean;
    std::vector<Disk> local(disks.begin(), disks.end());
    for (auto& d : local) d.center = d.center - mean;

    DiskUnionMeasure m;
    for (const auto& arc : boundary_arcs(local)) {
        const Disk& d = local[arc.disk];
        const double r = d.radius;
        const double dt = arc.to - arc.from;
        m.perimeter += r * dt;
        m.area += 0.5 * (r * r * dt + r * (d.center.x * (std::sin(arc.to) - std::sin(arc.from)) -
                                           d.center.y * (std::cos(arc.to) - std::cos(arc.from))));
    }
    return m;
}

namespace {

std::vector<Disk> equal_disks(std::span<const Vec2> centers, double t) {
    if (!(t > 0.0)) throw ContractViolation("disk union: radius t must be positive");
    if (centers.empty()) throw ContractViolation("disk union: at least one center is required");
    std::vector<Disk> out;
    for (auto c : centers) out.push_back({c, t});
    return out;
}

}  // namespace

double disk_union_area(std::span<const Vec2> centers, double t) {
    return disk_union_measure(equal_disks(centers, t)).area;
}

double disk_union_perimeter(std::span<const Vec2> centers, double t) {
    return disk_union_measure(equal_disks(centers, t)).perimeter;
}

std::pair<Vec2, double> circumcircle(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double scale = std::max({dot(ab, ab), dot(ac, ac), 1e-300});
    if (std::abs(d) <= 1e-14 * scale) return {Vec2{}, std::numeric_limits<double>::infinity()};
    const double b2 = dot(ab, ab), c2 = dot(ac, ac);
    const Vec2 off{(ac.y * b2 - ab.y * c2) / d, (ab.x * c2 - ac.x * b2) / d};
    return {a + off, norm(off)};
}

std::vector<CriticalRadius> critical_radii(std::span<const Vec2> centers) {
    const auto pts = unique_points(centers);
    const int n = static_cast<int>(pts.size());
    std::vector<CriticalRadius> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            all.push_back({0.5 * norm(pts[i] - pts[j]), CriticalRadius::Kind::pairwise, {i, j, -1}});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const double r = circumcircle(pts[i], pts[j], pts[k]).second;
                if (std::isfinite(r)) all.push_back({r, CriticalRadius::Kind::circumradius, {i, j, k}});
            }
    std::stable_sort(all.begin(), all.end(),
                     [](const CriticalRadius& a, const CriticalRadius& b) { return a.value < b.value; });
    std::vector<CriticalRadius> out;
    for (const auto& c : all)
        if (out.empty() || c.value - out.back().value > kCritTol) out.push_back(c);
    return out;
}

std::vector<std::array<int, 3>> delaunay_triangles(std::span<const Vec2> points) {
    const int n = static_cast<int>(points.size());
    std::vector<std::array<int, 3>> tris;
    std::set<std::vector<int>> seen_cells;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const auto [cc, r] = circumcircle(points[i], points[j], points[k]);
                if (!std::isfinite(r)) continue;
                const double tol = 1e-10 * std::max(1.0, r);
                bool empty = true;
                std::vector<int> cell{i, j, k};
                for (int m = 0; m < n && empty; ++m) {
                    if (m == i || m == j || m == k) continue;
                    const double d = norm(points[m] - cc);
                    if (d < r - tol) empty = false;
                    else if (d <= r + tol) cell.push_back(m);
                }
                if (!empty) continue;
                std::sort(cell.begin(), cell.end());
                if (!seen_cells.insert(cell).second) continue;
                // Order the cocircular sites by angle and fan-triangulate.
                std::sort(cell.begin(), cell.end(), [&](int a, int b) {
                    return std::atan2(points[a].y - cc.y, points[a].x - cc.x) <
                           std::atan2(points[b].y - cc.y, points[b].x - cc.x);
                });
                for (std::size_t q = 1; q + 1 < cell.size(); ++q) tris.push_back({cell[0], cell[q], cell[q + 1]});
            }
    return tris;
}

namespace {

DiskUnionSummary summary_at(std::span<const Vec2> centers, double t) {
    DiskUnionSummary s;
    s.t = t;
    const auto m = disk_union_measure(equal_disks(centers, t));
    s.area = m.area;
    s.perimeter = m.perimeter;

    const auto pts = unique_points(centers);
    const int n = static_cast<int>(pts.size());

    UnionFind uf(n);
    int comps = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (norm(pts[i] - pts[j]) < 2.0 * t && uf.unite(i, j)) --comps;
    s.components = comps;

    // Alpha complex: a simplex enters at the radius of its smallest empty circumscribing circle.
    const auto tris = delaunay_triangles(pts);
    std::map<std::pair<int, int>, double> edge_value;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    int triangles_in = 0;
    std::vector<double> tri_r(tris.size());
    for (std::size_t k = 0; k < tris.size(); ++k) {
        const auto& tr = tris[k];
        tri_r[k] = circumcircle(pts[tr[0]], pts[tr[1]], pts[tr[2]]).second;
        if (tri_r[k] < t) ++triangles_in;
    }
    auto gabriel = [&](int a, int b) {
        const Vec2 mid = 0.5 * (pts[a] + pts[b]);
        const double r = 0.5 * norm(pts[a] - pts[b]);
        for (int m = 0; m < n; ++m)
            if (m != a && m != b && norm(pts[m] - mid) < r * (1.0 - 1e-12)) return false;
        return true;
    };
    for (std::size_t k = 0; k < tris.size(); ++k) {
        for (int e = 0; e < 3; ++e) {
            const auto kk = key(tris[k][e], tris[k][(e + 1) % 3]);
            auto [it, fresh] = edge_value.emplace(kk, tri_r[k]);
            if (!fresh) it->second = std::min(it->second, tri_r[k]);
        }
    }
    if (tris.empty()) {
        // Collinear (or fewer than three) sites: Delaunay edges join consecutive points.
        for (int i = 0; i + 1 < n; ++i) edge_value.emplace(key(i, i + 1), std::numeric_limits<double>::infinity());
    }
    int edges_in = 0;
    for (auto& [e, v] : edge_value) {
        if (gabriel(e.first, e.second)) v = 0.5 * norm(pts[e.first] - pts[e.second]);
        if (v < t) ++edges_in;
    }
    const int chi = n - edges_in + triangles_in;
    s.holes = comps - chi;
    return s;
}

}  // namespace

DiskUnionSummary euler_summary(std::span<const Vec2> centers, double t) {
    if (!(t > 0.0)) throw ContractViolation("euler_summary: radius t must be positive");
    for (const auto& c : critical_radii(centers))
        if (std::abs(c.value - t) <= kCritTol * std::max(1.0, t))
            throw AmbiguousTopology("euler_summary: t = " + std::to_string(t) +
                                    " is a critical radius; evaluate at a perturbed radius instead");
    return summary_at(centers, t);
}

DiskUnionSummary euler_summary_perturbed(std::span<const Vec2> centers, double t) {
    if (!(t > 0.0)) throw ContractViolation("euler_summary: radius t must be positive");
    for (const auto& c : critical_radii(centers)) {
        if (std::abs(c.value - t) <= kCritTol * std::max(1.0, t)) {
            DiskUnionSummary s = summary_at(centers, t * (1.0 + 1e-9));
            s.t = t;
            return s;
        }
    }
    return summary_at(centers, t);
}

}  // namespace parvol
