#pragma once

#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "parvol/vec.hpp"

namespace parvol {

/// Absolute tolerance for geometric predicates on coordinates of magnitude <= kCoordRange.
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kCoordRange = 1e3;

/// Convex polytope in dimension 2 or 3. 2D polytopes keep z = 0; their facets are the
/// polygon edges in counter-clockwise order and the edge list is empty.
struct ConvexPolytope {
    struct Facet {
        Vec3 normal;            // unit outward normal
        double offset = 0.0;    // normal . x <= offset on the polytope
        std::vector<int> loop;  // vertex indices, counter-clockwise seen from outside
    };
    struct Edge {
        int a = 0;
        int b = 0;
        int f1 = 0;
        int f2 = 0;
    };

    int dim = 0;
    std::vector<Vec3> vertices;  // sorted lexicographically
    std::vector<Facet> facets;
    std::vector<Edge> edges;     // 3D only

    /// Area in 2D, volume in 3D.
    double volume() const;
    /// Perimeter in 2D, surface area in 3D.
    double boundary_measure() const;
    double facet_area(std::size_t k) const;
    bool contains(Vec3 p, double tol = kGeomTol) const;
    /// Euclidean distance from p to the polytope (0 inside).
    double distance(Vec3 p) const;
    /// 2D only: vertices in counter-clockwise order starting at the lexicographically smallest.
    std::vector<Vec2> ring() const;
    Vec3 centroid_of_vertices() const;
};

/// Convex hull of points in dimension 2 or 3. Throws DegeneracyError (carrying the affine
/// dimension) when the points do not span the space.
ConvexPolytope convex_hull(std::span<const Coords> points, int dim);
ConvexPolytope convex_hull_2d(std::span<const Vec2> points);
ConvexPolytope convex_hull_3d(std::span<const Vec3> points);

/// Dimension of the affine span of the first `dim` coordinates of the points.
int affine_dimension(std::span<const Coords> points, int dim, double tol = kGeomTol);

struct Primitive;

struct PointPrim {
    Coords p{};
};
struct SegmentPrim {
    Coords a{};
    Coords b{};
};
/// Axis-aligned box center +- half.
struct BoxPrim {
    Coords center{};
    Coords half{};
};
struct BallPrim {
    Coords center{};
    double radius = 0.0;
};
/// Closed simple polygon (region), stored counter-clockwise.
struct PolygonPrim {
    std::vector<Vec2> vertices;
    bool convex = false;
};
/// Convex hull of a 3D vertex list.
struct PolytopePrim {
    ConvexPolytope hull;
};
/// base (in the first base_dim coordinates) x box (in the remaining coordinates).
struct ProductPrim {
    std::shared_ptr<const Primitive> base;
    int base_dim = 0;
    Coords center{};  // box factor, indices base_dim .. n-1 used
    Coords half{};
};

struct Primitive {
    std::variant<PointPrim, SegmentPrim, BoxPrim, BallPrim, PolygonPrim, PolytopePrim, ProductPrim>
        shape;
};

Primitive make_point(const Coords& p);
Primitive make_segment(const Coords& a, const Coords& b);
Primitive make_box(const Coords& center, const Coords& half);
Primitive make_ball(const Coords& center, double radius);
/// Orientation is normalized; throws ValidationError when not simple.
Primitive make_polygon(std::vector<Vec2> vertices);
Primitive make_polytope(std::span<const Vec3> vertices);
Primitive make_product(Primitive base, int base_dim, const Coords& center, const Coords& half);

/// Compact set A as a finite union of primitives in R^dim.
struct Scene {
    int dim = 0;
    std::vector<Primitive> primitives;

    /// Throws ValidationError naming the first offending primitive.
    void validate() const;
    std::pair<Coords, Coords> bounding_box() const;
};

/// Structuring body B.
struct EuclideanBall {
    double radius = 1.0;
};
struct PolytopeBody {
    ConvexPolytope hull;
};
/// 1D union of closed intervals; convex only when it has a single interval.
struct IntervalBody {
    std::vector<std::pair<double, double>> intervals;
};

struct StructuringBody {
    int dim = 0;
    std::variant<EuclideanBall, PolytopeBody, IntervalBody> shape;

    static StructuringBody ball(int dim, double radius = 1.0);
    static StructuringBody polytope(std::span<const Coords> vertices, int dim);
    static StructuringBody intervals(std::vector<std::pair<double, double>> intervals);

    double volume() const;
    bool is_convex() const;
    bool origin_in_interior() const;
    std::pair<Coords, Coords> bounding_box() const;
};

double primitive_volume(const Primitive& prim, int dim);
std::pair<Coords, Coords> primitive_bounding_box(const Primitive& prim, int dim);

/// Euclidean distance from x to the primitive.
double euclidean_distance(const Coords& x, const Primitive& prim, int dim);

/// Gauge (Minkowski functional) of a convex body containing the origin in its interior.
class Gauge {
public:
    /// Throws ContractViolation when B is non-convex or 0 is not interior.
    explicit Gauge(const StructuringBody& body);

    double norm(const Coords& z) const;
    double distance(const Coords& x, const Primitive& prim) const;
    double distance(const Coords& x, const Scene& scene) const;
    bool is_euclidean() const { return euclidean_; }
    int dim() const { return dim_; }

private:
    double segment_distance(const Coords& p, const Coords& e) const;
    double vertex_set_distance(const Coords& x, std::span<const Coords> vertices) const;
    double ball_distance(const Coords& x, const BallPrim& ball) const;

    int dim_ = 0;
    bool euclidean_ = true;
    double radius_ = 1.0;
    std::vector<Coords> dual_;  // n_k / o_k for each facet of B
    ConvexPolytope body_;
};

/// d_B(x, A) = inf { ||x - y||_B : y in A }.
double gauge_distance(const Coords& x, const Scene& scene, const StructuringBody& body);

/// Exact diameter of the scene.
double diameter(const Scene& scene);

/// Finite set of points whose convex hull is conv(primitive); balls are excluded.
std::vector<Coords> extreme_points(const Primitive& prim, int dim);

}  // namespace parvol
