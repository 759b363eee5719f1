#include "parvol/geom_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lp.hpp"
#include "parvol/errors.hpp"

namespace parvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double polygon_signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = orient2d(c, d, a), d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c), d4 = orient2d(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    if (d1 == 0 && on_seg(c, d, a)) return true;
    if (d2 == 0 && on_seg(c, d, b)) return true;
    if (d3 == 0 && on_seg(a, b, c)) return true;
    if (d4 == 0 && on_seg(a, b, d)) return true;
    return false;
}

bool polygon_is_simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygon_is_convex(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        if (orient2d(v[i], v[(i + 1) % n], v[(i + 2) % n]) < -kGeomTol) return false;
    return true;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& v) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

double seg_dist(const Coords& x, const Coords& a, const Coords& b) {
    const Coords e = b - a;
    const double ee = dot(e, e);
    double s = ee > 0 ? dot(x - a, e) / ee : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return norm(x - (a + s * e));
}

double polygon_distance(Vec2 p, const PolygonPrim& poly) {
    if (point_in_polygon(p, poly.vertices)) return 0.0;
    double best = kInf;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
        best = std::min(best, seg_dist(to_coords(p), to_coords(v[i]), to_coords(v[(i + 1) % v.size()])));
    return best;
}

void box_corners(const Coords& c, const Coords& h, int from, int to, std::vector<Coords>& out) {
    const int k = to - from;
    for (int mask = 0; mask < (1 << k); ++mask) {
        Coords p{};
        for (int i = 0; i < k; ++i) p[i] = c[from + i] + ((mask >> i) & 1 ? h[from + i] : -h[from + i]);
        out.push_back(p);
    }
}

void check_finite(const Coords& c, int dim, int index) {
    for (int i = 0; i < dim; ++i)
        if (!std::isfinite(c[i])) throw ValidationError("primitive " + std::to_string(index) + ": non-finite coordinate", index);
}

void validate_primitive(const Primitive& prim, int dim, int index) {
    const std::string where = "primitive " + std::to_string(index) + ": ";
    std::visit(overloaded{
                   [&](const PointPrim& p) { check_finite(p.p, dim, index); },
                   [&](const SegmentPrim& s) {
                       check_finite(s.a, dim, index);
                       check_finite(s.b, dim, index);
                   },
                   [&](const BoxPrim& b) {
                       check_finite(b.center, dim, index);
                       for (int i = 0; i < dim; ++i)
                           if (!(b.half[i] >= 0.0)) throw ValidationError(where + "negative box half-width", index);
                   },
                   [&](const BallPrim& b) {
                       check_finite(b.center, dim, index);
                       if (!(b.radius >= 0.0)) throw ValidationError(where + "negative radius", index);
                   },
                   [&](const PolygonPrim& p) {
                       if (dim != 2) throw ValidationError(where + "polygon requires dimension 2", index);
                       if (p.vertices.size() < 3) throw ValidationError(where + "polygon needs >= 3 vertices", index);
                       if (!polygon_is_simple(p.vertices)) throw ValidationError(where + "polygon is not simple", index);
                       if (std::abs(polygon_signed_area(p.vertices)) <= 0.0)
                           throw ValidationError(where + "polygon has zero area", index);
                   },
                   [&](const PolytopePrim& p) {
                       if (dim != 3) throw ValidationError(where + "polytope requires dimension 3", index);
                       if (p.hull.dim != 3 || p.hull.vertices.size() < 4)
                           throw ValidationError(where + "polytope needs >= 4 affinely independent vertices", index);
                   },
                   [&](const ProductPrim& p) {
                       if (!p.base) throw ValidationError(where + "product without base", index);
                       if (p.base_dim < 1 || p.base_dim >= dim)
                           throw ValidationError(where + "product base dimension must be in [1, n)", index);
                       if (std::holds_alternative<BallPrim>(p.base->shape) ||
                           std::holds_alternative<ProductPrim>(p.base->shape))
                           throw ValidationError(where + "product base must be a point, segment, box, polygon or polytope",
                                                 index);
                       validate_primitive(*p.base, p.base_dim, index);
                       for (int i = p.base_dim; i < dim; ++i)
                           if (!(p.half[i] >= 0.0)) throw ValidationError(where + "negative box half-width", index);
                   },
               },
               prim.shape);
}

}  // namespace

Primitive make_point(const Coords& p) { return {PointPrim{p}}; }
Primitive make_segment(const Coords& a, const Coords& b) { return {SegmentPrim{a, b}}; }
Primitive make_box(const Coords& center, const Coords& half) { return {BoxPrim{center, half}}; }
Primitive make_ball(const Coords& center, double radius) { return {BallPrim{center, radius}}; }

Primitive make_polygon(std::vector<Vec2> vertices) {
    if (vertices.size() >= 3 && polygon_signed_area(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
    PolygonPrim p{std::move(vertices), false};
    if (p.vertices.size() >= 3 && polygon_is_simple(p.vertices)) p.convex = polygon_is_convex(p.vertices);
    return {std::move(p)};
}

Primitive make_polytope(std::span<const Vec3> vertices) {
    try {
        return {PolytopePrim{convex_hull_3d(vertices)}};
    } catch (const DegeneracyError& e) {
        throw ValidationError(std::string("polytope: ") + e.what());
    }
}

Primitive make_product(Primitive base, int base_dim, const Coords& center, const Coords& half) {
    return {ProductPrim{std::make_shared<const Primitive>(std::move(base)), base_dim, center, half}};
}

void Scene::validate() const {
    if (dim < 1 || dim > kMaxDim) throw ValidationError("scene dimension must be in [1, 4]");
    if (primitives.empty()) throw ValidationError("scene has no primitives");
    for (std::size_t i = 0; i < primitives.size(); ++i) validate_primitive(primitives[i], dim, static_cast<int>(i));
}

std::pair<Coords, Coords> primitive_bounding_box(const Primitive& prim, int dim) {
    Coords lo{}, hi{};
    for (int i = 0; i < dim; ++i) lo[i] = kInf, hi[i] = -kInf;
    auto add = [&](const Coords& p, double r) {
        for (int i = 0; i < dim; ++i) lo[i] = std::min(lo[i], p[i] - r), hi[i] = std::max(hi[i], p[i] + r);
    };
    if (const auto* b = std::get_if<BallPrim>(&prim.shape)) {
        add(b->center, b->radius);
    } else {
        for (const auto& p : extreme_points(prim, dim)) add(p, 0.0);
    }
    return {lo, hi};
}

std::pair<Coords, Coords> Scene::bounding_box() const {
    Coords lo{}, hi{};
    for (int i = 0; i < dim; ++i) lo[i] = kInf, hi[i] = -kInf;
    for (const auto& p : primitives) {
        const auto [a, b] = primitive_bounding_box(p, dim);
        for (int i = 0; i < dim; ++i) lo[i] = std::min(lo[i], a[i]), hi[i] = std::max(hi[i], b[i]);
    }
    return {lo, hi};
}

std::vector<Coords> extreme_points(const Primitive& prim, int dim) {
    std::vector<Coords> out;
    std::visit(overloaded{
                   [&](const PointPrim& p) { out.push_back(p.p); },
                   [&](const SegmentPrim& s) {
                       out.push_back(s.a);
                       out.push_back(s.b);
                   },
                   [&](const BoxPrim& b) {
                       std::vector<Coords> c;
                       box_corners(b.center, b.half, 0, dim, c);
                       out = std::move(c);
                   },
                   [&](const BallPrim&) {},
                   [&](const PolygonPrim& p) {
                       for (auto v : p.vertices) out.push_back(to_coords(v));
                   },
                   [&](const PolytopePrim& p) {
                       for (auto v : p.hull.vertices) out.push_back(to_coords(v));
                   },
                   [&](const ProductPrim& p) {
                       const auto base = extreme_points(*p.base, p.base_dim);
                       std::vector<Coords> corners;
                       box_corners(p.center, p.half, p.base_dim, dim, corners);
                       for (const auto& b : base) {
                           for (const auto& c : corners) {
                               Coords q = b;
                               for (int i = p.base_dim; i < dim; ++i) q[i] = c[i - p.base_dim];
                               out.push_back(q);
                           }
                       }
                   },
               },
               prim.shape);
    return out;
}

double primitive_volume(const Primitive& prim, int dim) {
    return std::visit(overloaded{
                          [&](const PointPrim&) { return 0.0; },
                          [&](const SegmentPrim& s) { return dim == 1 ? std::abs(s.b[0] - s.a[0]) : 0.0; },
                          [&](const BoxPrim& b) {
                              double v = 1.0;
                              for (int i = 0; i < dim; ++i) v *= 2.0 * b.half[i];
                              return v;
                          },
                          [&](const BallPrim& b) { return unit_ball_volume(dim) * std::pow(b.radius, dim); },
                          [&](const PolygonPrim& p) { return std::abs(polygon_signed_area(p.vertices)); },
                          [&](const PolytopePrim& p) { return p.hull.volume(); },
                          [&](const ProductPrim& p) {
                              double v = primitive_volume(*p.base, p.base_dim);
                              for (int i = p.base_dim; i < dim; ++i) v *= 2.0 * p.half[i];
                              return v;
                          },
                      },
                      prim.shape);
}

double euclidean_distance(const Coords& x, const Primitive& prim, int dim) {
    return std::visit(overloaded{
                          [&](const PointPrim& p) {
                              double s = 0.0;
                              for (int i = 0; i < dim; ++i) s += (x[i] - p.p[i]) * (x[i] - p.p[i]);
                              return std::sqrt(s);
                          },
                          [&](const SegmentPrim& s) { return seg_dist(x, s.a, s.b); },
                          [&](const BoxPrim& b) {
                              double s = 0.0;
                              for (int i = 0; i < dim; ++i) {
                                  const double q = std::max(std::abs(x[i] - b.center[i]) - b.half[i], 0.0);
                                  s += q * q;
                              }
                              return std::sqrt(s);
                          },
                          [&](const BallPrim& b) {
                              double s = 0.0;
                              for (int i = 0; i < dim; ++i) s += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                              return std::max(std::sqrt(s) - b.radius, 0.0);
                          },
                          [&](const PolygonPrim& p) { return polygon_distance(to_vec2(x), p); },
                          [&](const PolytopePrim& p) { return p.hull.distance(to_vec3(x)); },
                          [&](const ProductPrim& p) {
                              const double db = euclidean_distance(x, *p.base, p.base_dim);
                              double s = db * db;
                              for (int i = p.base_dim; i < dim; ++i) {
                                  const double q = std::max(std::abs(x[i] - p.center[i]) - p.half[i], 0.0);
                                  s += q * q;
                              }
                              return std::sqrt(s);
                          },
                      },
                      prim.shape);
}

// ---------------------------------------------------------------------------
// Structuring bodies

StructuringBody StructuringBody::ball(int dim, double radius) { return {dim, EuclideanBall{radius}}; }

StructuringBody StructuringBody::polytope(std::span<const Coords> vertices, int dim) {
    return {dim, PolytopeBody{convex_hull(vertices, dim)}};
}

StructuringBody StructuringBody::intervals(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    return {1, IntervalBody{std::move(iv)}};
}

double StructuringBody::volume() const {
    return std::visit(overloaded{
                          [&](const EuclideanBall& b) { return unit_ball_volume(dim) * std::pow(b.radius, dim); },
                          [&](const PolytopeBody& p) { return p.hull.volume(); },
                          [&](const IntervalBody& iv) {
                              // Measure of the union.
                              double total = 0.0, lo = -kInf, hi = -kInf;
                              for (const auto& [a, b] : iv.intervals) {
                                  if (a > hi) {
                                      if (hi > lo) total += hi - lo;
                                      lo = a, hi = b;
                                  } else {
                                      hi = std::max(hi, b);
                                  }
                              }
                              if (hi > lo) total += hi - lo;
                              return total;
                          },
                      },
                      shape);
}

bool StructuringBody::is_convex() const {
    if (const auto* iv = std::get_if<IntervalBody>(&shape)) {
        for (std::size_t i = 1; i < iv->intervals.size(); ++i)
            if (iv->intervals[i].first > iv->intervals[i - 1].second) return false;
        return !iv->intervals.empty();
    }
    return true;
}

bool StructuringBody::origin_in_interior() const {
    return std::visit(overloaded{
                          [&](const EuclideanBall& b) { return b.radius > 0.0; },
                          [&](const PolytopeBody& p) {
                              for (const auto& f : p.hull.facets)
                                  if (!(f.offset > kGeomTol)) return false;
                              return true;
                          },
                          [&](const IntervalBody& iv) {
                              for (const auto& [a, b] : iv.intervals)
                                  if (a < 0.0 && 0.0 < b) return true;
                              return false;
                          },
                      },
                      shape);
}

std::pair<Coords, Coords> StructuringBody::bounding_box() const {
    Coords lo{}, hi{};
    std::visit(overloaded{
                   [&](const EuclideanBall& b) {
                       for (int i = 0; i < dim; ++i) lo[i] = -b.radius, hi[i] = b.radius;
                   },
                   [&](const PolytopeBody& p) {
                       for (int i = 0; i < dim; ++i) lo[i] = kInf, hi[i] = -kInf;
                       for (const auto& v : p.hull.vertices) {
                           const Coords c = to_coords(v);
                           for (int i = 0; i < dim; ++i) lo[i] = std::min(lo[i], c[i]), hi[i] = std::max(hi[i], c[i]);
                       }
                   },
                   [&](const IntervalBody& iv) {
                       lo[0] = kInf, hi[0] = -kInf;
                       for (const auto& [a, b] : iv.intervals) lo[0] = std::min(lo[0], a), hi[0] = std::max(hi[0], b);
                   },
               },
               shape);
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Gauge

Gauge::Gauge(const StructuringBody& body) : dim_(body.dim) {
    if (!body.is_convex()) throw ContractViolation("gauge: structuring body is not convex");
    if (!body.origin_in_interior()) throw ContractViolation("gauge: origin is not interior to the structuring body");
    if (const auto* b = std::get_if<EuclideanBall>(&body.shape)) {
        euclidean_ = true;
        radius_ = b->radius;
    } else if (const auto* p = std::get_if<PolytopeBody>(&body.shape)) {
        euclidean_ = false;
        body_ = p->hull;
        for (const auto& f : body_.facets) dual_.push_back((1.0 / f.offset) * to_coords(f.normal));
    } else {
        const auto& iv = std::get<IntervalBody>(body.shape);
        euclidean_ = false;
        double lo = kInf, hi = -kInf;
        for (const auto& [a, b] : iv.intervals) lo = std::min(lo, a), hi = std::max(hi, b);
        dual_.push_back({1.0 / hi, 0, 0, 0});
        dual_.push_back({1.0 / lo, 0, 0, 0});
        body_.dim = 1;
    }
}

double Gauge::norm(const Coords& z) const {
    if (euclidean_) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += z[i] * z[i];
        return std::sqrt(s) / radius_;
    }
    double m = 0.0;
    for (const auto& u : dual_) m = std::max(m, dot(u, z));
    return m;
}

double Gauge::segment_distance(const Coords& p, const Coords& e) const {
    // min over s in [0,1] of max_k (u_k.p - s u_k.e): upper envelope of affine functions.
    const std::size_t k = dual_.size();
    std::vector<double> alpha(k), beta(k);
    for (std::size_t i = 0; i < k; ++i) alpha[i] = dot(dual_[i], p), beta[i] = dot(dual_[i], e);
    auto f = [&](double s) {
        double m = -kInf;
        for (std::size_t i = 0; i < k; ++i) m = std::max(m, alpha[i] - s * beta[i]);
        return m;
    };
    double best = std::min(f(0.0), f(1.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double db = beta[i] - beta[j];
            if (db == 0.0) continue;
            const double s = (alpha[i] - alpha[j]) / db;
            if (s > 0.0 && s < 1.0) best = std::min(best, f(s));
        }
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max({scale, std::abs(alpha[i]), std::abs(beta[i])});
    return best <= 8.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0 : best;
}

double Gauge::vertex_set_distance(const Coords& x, std::span<const Coords> vertices) const {
    if (vertices.size() == 1) return norm(x - vertices[0]);
    if (vertices.size() == 2) return segment_distance(x - vertices[0], vertices[1] - vertices[0]);
    const int rows = static_cast<int>(dual_.size());
    const int cols = static_cast<int>(vertices.size());
    std::vector<double> m(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m[static_cast<std::size_t>(r) * cols + c] = dot(dual_[r], x - vertices[c]);
    return std::max(detail::minimax_value(m, rows, cols), 0.0);
}

double Gauge::ball_distance(const Coords& x, const BallPrim& ball) const {
    // Smallest s with dist_2(x - c, sB) <= r; the distance is non-increasing in s.
    const Coords p = x - ball.center;
    if (std::sqrt(dot(p, p)) <= ball.radius) return 0.0;
    if (body_.dim == 1) {
        const double q = std::abs(p[0]) - ball.radius;
        const double ext = p[0] > 0 ? 1.0 / dual_[0][0] : -1.0 / dual_[1][0];
        return q / ext;
    }
    auto dist_to_scaled = [&](double s) {
        if (s <= 0.0) return std::sqrt(dot(p, p));
        return s * body_.distance((1.0 / s) * to_vec3(p));
    };
    double lo = 0.0, hi = norm(p);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dist_to_scaled(mid) <= ball.radius) hi = mid;
        else lo = mid;
    }
    return hi;
}

double Gauge::distance(const Coords& x, const Primitive& prim) const {
    if (euclidean_) return euclidean_distance(x, prim, dim_) / radius_;
    return std::visit(overloaded{
                          [&](const PointPrim& p) { return norm(x - p.p); },
                          [&](const SegmentPrim& s) { return segment_distance(x - s.a, s.b - s.a); },
                          [&](const BoxPrim& b) {
                              bool inside = true;
                              for (int i = 0; i < dim_; ++i)
                                  if (std::abs(x[i] - b.center[i]) > b.half[i]) inside = false;
                              if (inside) return 0.0;
                              const auto v = extreme_points(prim, dim_);
                              return vertex_set_distance(x, v);
                          },
                          [&](const BallPrim& b) { return ball_distance(x, b); },
                          [&](const PolygonPrim& p) {
                              if (point_in_polygon(to_vec2(x), p.vertices)) return 0.0;
                              double best = kInf;
                              for (std::size_t i = 0; i < p.vertices.size(); ++i) {
                                  const Coords a = to_coords(p.vertices[i]);
                                  const Coords b = to_coords(p.vertices[(i + 1) % p.vertices.size()]);
                                  best = std::min(best, segment_distance(x - a, b - a));
                              }
                              return best;
                          },
                          [&](const PolytopePrim& p) {
                              if (p.hull.contains(to_vec3(x), 0.0)) return 0.0;
                              const auto v = extreme_points(prim, dim_);
                              return vertex_set_distance(x, v);
                          },
                          [&](const ProductPrim& p) {
                              if (const auto* poly = std::get_if<PolygonPrim>(&p.base->shape); poly && !poly->convex)
                                  throw ContractViolation("gauge: product with a non-convex polygon base needs a Euclidean body");
                              if (euclidean_distance(x, prim, dim_) == 0.0) return 0.0;
                              const auto v = extreme_points(prim, dim_);
                              return vertex_set_distance(x, v);
                          },
                      },
                      prim.shape);
}

double Gauge::distance(const Coords& x, const Scene& scene) const {
    double best = kInf;
    for (const auto& p : scene.primitives) {
        best = std::min(best, distance(x, p));
        if (best == 0.0) break;
    }
    return best;
}

double gauge_distance(const Coords& x, const Scene& scene, const StructuringBody& body) {
    if (scene.dim != body.dim) throw ContractViolation("gauge_distance: scene and body dimensions differ");
    return Gauge(body).distance(x, scene);
}

double diameter(const Scene& scene) {
    struct Item {
        Coords c;
        double r;
        int owner;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const auto& prim = scene.primitives[i];
        if (const auto* b = std::get_if<BallPrim>(&prim.shape)) {
            items.push_back({b->center, b->radius, static_cast<int>(i)});
        } else {
            for (const auto& p : extreme_points(prim, scene.dim)) items.push_back({p, 0.0, static_cast<int>(i)});
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        best = std::max(best, 2.0 * items[i].r);
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            double s = 0.0;
            for (int k = 0; k < scene.dim; ++k) s += (items[i].c[k] - items[j].c[k]) * (items[i].c[k] - items[j].c[k]);
            best = std::max(best, std::sqrt(s) + items[i].r + items[j].r);
        }
    }
    return best;
}

}  // namespace parvol
