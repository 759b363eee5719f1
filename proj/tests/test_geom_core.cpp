#include <doctest.h>

#include <cmath>

#include "parvol/errors.hpp"
#include "parvol/geom_core.hpp"
#include "parvol/scene_io.hpp"
#include "support/rng.hpp"

using namespace parvol;
using testsupport::Gen;

namespace {

Scene scene_of(int dim, std::vector<Primitive> prims) { return Scene{dim, std::move(prims)}; }

StructuringBody square_body() {
    std::vector<Coords> v{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    return StructuringBody::polytope(v, 2);
}

// Brute-force gauge distance: minimum over a dense sample of the primitive.
double sampled_gauge_distance(const Gauge& g, const Coords& x, const std::vector<Coords>& samples) {
    double best = 1e300;
    for (const auto& y : samples) best = std::min(best, g.norm(x - y));
    return best;
}

std::vector<Coords> sample_box_2d(const Coords& c, const Coords& h, int k) {
    std::vector<Coords> out;
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
            out.push_back({c[0] - h[0] + 2.0 * h[0] * i / k, c[1] - h[1] + 2.0 * h[1] * j / k});
    return out;
}

}  // namespace

TEST_CASE("convex hull of unit square corners") {
    std::vector<Vec2> p{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto h = convex_hull_2d(p);
    CHECK(h.vertices.size() == 4);
    CHECK(h.volume() == doctest::Approx(1.0));
    CHECK(h.boundary_measure() == doctest::Approx(4.0));
}

TEST_CASE("convex hull drops the centroid of a tetrahedron") {
    std::vector<Vec3> p{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {0, 0, 0}};
    const auto h = convex_hull_3d(p);
    CHECK(h.vertices.size() == 4);
    CHECK(h.facets.size() == 4);
    CHECK(h.edges.size() == 6);
    CHECK(h.volume() == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("collinear input reports its affine dimension") {
    std::vector<Vec2> p{{0, 0}, {1, 0}, {2, 0}};
    try {
        (void)convex_hull_2d(p);
        FAIL("expected a degeneracy error");
    } catch (const DegeneracyError& e) {
        CHECK(e.affine_dimension() == 1);
    }
    std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    CHECK_THROWS_AS(convex_hull_3d(flat), DegeneracyError);
}

TEST_CASE("cube hull merges coplanar triangles") {
    std::vector<Vec3> p;
    for (int m = 0; m < 8; ++m) p.push_back({double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)});
    p.push_back({0.5, 0.5, 0.0});  // on a face
    p.push_back({0.5, 0.0, 0.0});  // on an edge
    const auto h = convex_hull_3d(p);
    CHECK(h.vertices.size() == 8);
    CHECK(h.facets.size() == 6);
    CHECK(h.edges.size() == 12);
    CHECK(h.volume() == doctest::Approx(1.0));
    CHECK(h.boundary_measure() == doctest::Approx(6.0));
}

TEST_CASE("hull property: contains inputs, unit normals, Euler relation") {
    Gen g(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec3> p;
        const int k = g.integer(4, 40);
        for (int i = 0; i < k; ++i) p.push_back(g.point3(-5, 5));
        const auto h = convex_hull_3d(p);
        for (const auto& f : h.facets) {
            CHECK(std::abs(norm(f.normal) - 1.0) < 1e-12);
            for (auto v : h.vertices) CHECK(dot(f.normal, v) - f.offset <= 1e-9);
        }
        for (auto q : p) CHECK(h.contains(q, 1e-9));
        CHECK(int(h.vertices.size()) - int(h.edges.size()) + int(h.facets.size()) == 2);
    }
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec2> p;
        const int k = g.integer(3, 40);
        for (int i = 0; i < k; ++i) p.push_back(g.point2(-5, 5));
        const auto h = convex_hull_2d(p);
        for (auto q : p) CHECK(h.contains({q.x, q.y, 0.0}, 1e-9));
    }
}

TEST_CASE("gauge distance examples") {
    const auto ball = StructuringBody::ball(2);
    CHECK(gauge_distance({0, 0}, scene_of(2, {make_point({1, 0})}), ball) == doctest::Approx(1.0));
    CHECK(gauge_distance({0, 0}, scene_of(2, {make_point({3, 4})}), square_body()) == doctest::Approx(4.0));
    CHECK(gauge_distance({0.2, 0.3}, scene_of(2, {make_box({0, 0}, {1, 1})}), square_body()) == 0.0);
    CHECK(gauge_distance({0.2, 0.3}, scene_of(2, {make_box({0, 0}, {1, 1})}), ball) == 0.0);
}

TEST_CASE("gauge rejects non-convex bodies and bodies missing the origin") {
    const auto iv = StructuringBody::intervals({{-5, -3}, {3, 5}});
    CHECK_THROWS_AS(Gauge{iv}, ContractViolation);
    std::vector<Coords> v{{1, 1}, {2, 1}, {2, 2}, {1, 2}};
    CHECK_THROWS_AS(Gauge{StructuringBody::polytope(v, 2)}, ContractViolation);
}

TEST_CASE("polytope gauge agrees with a sampled minimization") {
    Gen g(11);
    std::vector<Coords> hex;
    for (int k = 0; k < 6; ++k) hex.push_back({std::cos(k * M_PI / 3) * 1.3, 0.7 * std::sin(k * M_PI / 3) + 0.1});
    for (const auto& body : {square_body(), StructuringBody::polytope(hex, 2)}) {
        const Gauge gauge(body);
        for (int trial = 0; trial < 30; ++trial) {
            const Coords c = g.coords(2, -2, 2);
            const Coords h{g.uniform(0.1, 1.0), g.uniform(0.1, 1.0)};
            const Coords x = g.coords(2, -5, 5);
            const auto samples = sample_box_2d(c, h, 300);
            const double brute = sampled_gauge_distance(gauge, x, samples);
            const double exact = gauge.distance(x, make_box(c, h));
            CHECK(exact <= brute + 1e-9);
            CHECK(exact >= brute - 0.02);

            const Coords a = g.coords(2, -3, 3), b = g.coords(2, -3, 3);
            std::vector<Coords> seg;
            for (int k = 0; k <= 3000; ++k) seg.push_back(a + (k / 3000.0) * (b - a));
            const double sb = sampled_gauge_distance(gauge, x, seg);
            const double se = gauge.distance(x, make_segment(a, b));
            CHECK(se <= sb + 1e-9);
            CHECK(se >= sb - 0.01);
        }
    }
}

TEST_CASE("gauge distance to a ball primitive under a polytope body") {
    // Square body: the sup-norm distance from x to a disk is the smallest s with
    // dist_2(x - c, [-s, s]^2) <= r.
    const Gauge gauge(square_body());
    const auto disk = make_ball({0, 0}, 1.0);
    CHECK(gauge.distance({3, 0}, disk) == doctest::Approx(2.0).epsilon(1e-10));
    // Along the diagonal, the square corner (s, s) reaches the circle when |(3-s, 3-s)| = 1.
    CHECK(gauge.distance({3, 3}, disk) == doctest::Approx(3.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("gauge distance is zero on A and 1-Lipschitz") {
    Gen g(5);
    std::vector<Coords> oct{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    const auto bodies = std::vector<StructuringBody>{StructuringBody::ball(3, 1.5), StructuringBody::polytope(oct, 3)};
    std::vector<Vec3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Scene s = scene_of(3, {make_point({2, 2, 2}), make_segment({-2, 0, 0}, {-1, 1, 0}),
                                 make_box({0, -2, 0}, {0.5, 0.3, 0.2}), make_ball({3, -1, 0}, 0.7),
                                 make_polytope(tet)});
    for (const auto& body : bodies) {
        const Gauge gauge(body);
        CHECK(gauge.distance({2, 2, 2}, s) == 0.0);
        CHECK(gauge.distance({-1.5, 0.5, 0}, s) < 1e-12);
        CHECK(gauge.distance({0.2, -2.1, 0.1}, s) == 0.0);
        CHECK(gauge.distance({3.3, -1.2, 0.1}, s) == 0.0);
        CHECK(gauge.distance({0.1, 0.1, 0.1}, s) == 0.0);
        for (int trial = 0; trial < 300; ++trial) {
            const Coords x = g.coords(3, -4, 4), y = g.coords(3, -4, 4);
            const double dx = gauge.distance(x, s), dy = gauge.distance(y, s);
            double de = 1e300;
            for (const auto& prim : s.primitives) de = std::min(de, euclidean_distance(x, prim, 3));
            CHECK((dx == 0.0) == (de == 0.0));
            CHECK(std::abs(dx - dy) <= gauge.norm(x - y) + 1e-7);
        }
    }
}

TEST_CASE("diameter examples") {
    CHECK(diameter(scene_of(2, {make_point({1, 2})})) == 0.0);
    std::vector<Primitive> cube;
    for (int m = 0; m < 8; ++m) cube.push_back(make_point({double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)}));
    CHECK(diameter(scene_of(3, cube)) == doctest::Approx(std::sqrt(3.0)));
    CHECK(diameter(scene_of(1, {make_point({0}), make_point({4})})) == 4.0);
    CHECK(diameter(scene_of(2, {make_ball({0, 0}, 1), make_ball({3, 4}, 2)})) == doctest::Approx(8.0));
    CHECK(diameter(scene_of(2, {make_ball({0, 0}, 1.5)})) == doctest::Approx(3.0));
}

TEST_CASE("scene validation names the offending primitive") {
    Scene s = scene_of(2, {make_ball({0, 0}, 1.0), make_box({0, 0}, {1, -1})});
    try {
        s.validate();
        FAIL("expected validation error");
    } catch (const ValidationError& e) {
        CHECK(e.primitive_index() == 1);
    }
    Scene bow = scene_of(2, {make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}})});
    CHECK_THROWS_AS(bow.validate(), ValidationError);
}

TEST_CASE("parse_scene: valid, invalid and malformed documents") {
    const auto ok = parse_scene(R"({"dim":2,"A":[{"type":"ball","center":[0,0],"radius":1},
        {"type":"ball","center":[3,0],"radius":0.5}],"B":{"type":"ball"}})");
    CHECK(ok.scene.primitives.size() == 2);
    CHECK(ok.body.has_value());

    try {
        parse_scene(R"({"dim":2,"A":[{"type":"ball","center":[0,0],"radius":-1}]})");
        FAIL("expected validation error");
    } catch (const ValidationError& e) {
        CHECK(e.primitive_index() == 0);
    }
    try {
        parse_scene(R"({"dim":2,"A":[{"type":"point","p":[0,0]},{"type":"point","p":[0,0,1]}]})");
        FAIL("expected validation error");
    } catch (const ValidationError& e) {
        CHECK(e.primitive_index() == 1);
    }
    try {
        parse_scene("{\n  \"dim\": 2,\n  \"A\": [ oops ]\n}");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 9);
    }
}

TEST_CASE("scene JSON round trip preserves the hash") {
    const auto a = parse_scene(R"({"dim":3,"A":[
        {"type":"product","base":{"type":"segment","a":[1],"b":[10]},"factor":{"center":[0,0],"half_widths":[1,1]}},
        {"type":"polytope","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}],
        "B":{"type":"polytope","vertices":[[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]}})");
    const std::string text = scene_to_json(a.scene, a.body);
    const auto b = parse_scene(text);
    CHECK(scene_hash(a.scene, a.body) == scene_hash(b.scene, b.body));
    CHECK(scene_hash(a.scene, a.body).size() == 16);
    CHECK(primitive_volume(b.scene.primitives[0], 3) == doctest::Approx(36.0));
    CHECK(primitive_volume(b.scene.primitives[1], 3) == doctest::Approx(1.0 / 6.0));
}
