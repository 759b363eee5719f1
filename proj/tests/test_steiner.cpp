#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "parvol/errors.hpp"
#include "parvol/geom_core.hpp"
#include "parvol/steiner.hpp"
#include "support/rng.hpp"

using namespace parvol;
using testsupport::Gen;

namespace {

std::vector<Vec3> box_corners(double a, double b, double c) {
    std::vector<Vec3> p;
    for (int m = 0; m < 8; ++m) p.push_back({(m & 1) * a, ((m >> 1) & 1) * b, ((m >> 2) & 1) * c});
    return p;
}

Vec3 rotate(Vec3 p, double yaw, double pitch) {
    const Vec3 q{std::cos(yaw) * p.x - std::sin(yaw) * p.y, std::sin(yaw) * p.x + std::cos(yaw) * p.y, p.z};
    return {q.x, std::cos(pitch) * q.y - std::sin(pitch) * q.z, std::sin(pitch) * q.y + std::cos(pitch) * q.z};
}

// Area of P + Q as the hull of all pairwise vertex sums.
double sum_area_oracle(const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
    std::vector<Vec2> s;
    for (auto a : p)
        for (auto b : q) s.push_back(a + b);
    return convex_hull_2d(s).volume();
}

}  // namespace

TEST_CASE("planar Steiner polynomials") {
    const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto s = steiner_polynomial_2d(square);
    CHECK(s.c[0] == doctest::Approx(1.0));
    CHECK(s.c[1] == doctest::Approx(4.0));
    CHECK(s.c[2] == doctest::Approx(M_PI));
    const std::vector<Vec2> seg{{0, 0}, {3, 4}};
    s = steiner_polynomial_2d(seg);
    CHECK(s.c[0] == doctest::Approx(0.0));
    CHECK(s.c[1] == doctest::Approx(10.0));
    const std::vector<Vec2> tri{{0, 0}, {0, 1}, {1, 0}};  // clockwise input
    s = steiner_polynomial_2d(tri);
    CHECK(s.c[0] == doctest::Approx(0.5));
    CHECK(s.c[1] == doctest::Approx(2 + std::sqrt(2.0)));
    const std::vector<Vec2> dart{{0, 0}, {2, 1}, {4, 0}, {2, 3}};
    CHECK_THROWS_AS(steiner_polynomial_2d(dart), ContractViolation);
    s = steiner_polynomial_disk(2.0);
    CHECK(s(1.0) == doctest::Approx(9 * M_PI));
}

TEST_CASE("spatial Steiner polynomials") {
    auto s = steiner_polynomial_3d(box_corners(1, 1, 1));
    CHECK(s.c[0] == doctest::Approx(1.0));
    CHECK(s.c[1] == doctest::Approx(6.0));
    CHECK(s.c[2] == doctest::Approx(3 * M_PI));
    CHECK(s.c[3] == doctest::Approx(4 * M_PI / 3));
    const std::vector<Vec3> pt{{1, 2, 3}};
    s = steiner_polynomial_3d(pt);
    CHECK(s.c[0] == 0.0);
    CHECK(s.c[2] == 0.0);
    const std::vector<Vec3> seg{{0, 0, 0}, {2, 0, 0}, {1, 0, 0}};
    s = steiner_polynomial_3d(seg);
    CHECK(s.c[2] == doctest::Approx(2 * M_PI));
    CHECK(s.c[1] == 0.0);
    // Flat unit square: two-sided area, half-turn around each edge.
    const std::vector<Vec3> flat{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    s = steiner_polynomial_3d(flat);
    CHECK(s.c[1] == doctest::Approx(2.0));
    CHECK(s.c[2] == doctest::Approx(2 * M_PI));
}

TEST_CASE("property: rotated boxes and tetrahedra match closed forms") {
    Gen g(8);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = g.uniform(0.1, 3), b = g.uniform(0.1, 3), c = g.uniform(0.1, 3);
        const double yaw = g.uniform(0, 6.3), pitch = g.uniform(0, 6.3);
        auto p = box_corners(a, b, c);
        for (auto& v : p) v = rotate(v, yaw, pitch);
        const auto s = steiner_polynomial_3d(p);
        CHECK(s.c[0] == doctest::Approx(a * b * c).epsilon(1e-10));
        CHECK(s.c[1] == doctest::Approx(2 * (a * b + b * c + c * a)).epsilon(1e-10));
        CHECK(s.c[2] == doctest::Approx(M_PI * (a + b + c)).epsilon(1e-10));

        const double e = g.uniform(0.5, 2);
        std::vector<Vec3> tet{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
        for (auto& v : tet) v = rotate((e / std::sqrt(8.0)) * v, yaw, pitch);
        const auto st = steiner_polynomial_3d(tet);
        CHECK(st.c[0] == doctest::Approx(e * e * e / (6 * std::sqrt(2.0))).epsilon(1e-10));
        CHECK(st.c[1] == doctest::Approx(std::sqrt(3.0) * e * e).epsilon(1e-10));
        CHECK(st.c[2] == doctest::Approx(3 * e * (M_PI - std::acos(1.0 / 3.0))).epsilon(1e-10));
    }
}

TEST_CASE("counterexample polynomial") {
    auto r = counterexample_polynomial_3d(81, 3);
    CHECK(r.a0 == 8.0);
    CHECK(r.a1 == 24.0);
    CHECK(std::abs(r.a2 / M_PI - 86.0) < 1e-12);
    CHECK(r.nonconcave_at_zero);
    r = counterexample_polynomial_3d(2, 3);
    CHECK(r.a2 == doctest::Approx(7 * M_PI));
    CHECK_FALSE(r.nonconcave_at_zero);
    r = counterexample_polynomial_3d(24 / M_PI - 5, 3);
    CHECK(std::abs(r.determinant) < 1e-9);
    r = counterexample_polynomial_3d(10, 4);
    CHECK(r.a0 == 16.0);
    CHECK(r.a1 == 64.0);
    CHECK(r.a2 == doctest::Approx(2 * M_PI * (18.0 / 6.0 + 12.0)));
    CHECK_THROWS_AS(counterexample_polynomial_3d(1.5, 3), std::domain_error);
}

TEST_CASE("mixed area examples") {
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> vseg{{0, 0}, {0, 1}};
    CHECK(mixed_area(sq, sq) == doctest::Approx(1.0));
    CHECK(mixed_area(sq, vseg) == doctest::Approx(0.5));
    CHECK(2 * mixed_area_disk(sq, 1.0) == doctest::Approx(4.0));
    const std::vector<Vec2> pt{{3, 3}};
    CHECK(mixed_area(sq, pt) == doctest::Approx(0.0));
}

TEST_CASE("property: Minkowski sum by edge merge matches the pairwise-sum hull") {
    Gen g(13);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = g.convex_polygon(g.integer(3, 12));
        const auto q = g.convex_polygon(g.integer(3, 12));
        const double oracle = sum_area_oracle(p, q);
        CHECK(std::abs(polygon_area(minkowski_sum_convex(p, q))) == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(mixed_area(p, q) == doctest::Approx(mixed_area(q, p)).epsilon(1e-10));
        CHECK(mixed_area(p, p) == doctest::Approx(std::abs(polygon_area(convex_ring(p)))).epsilon(1e-10));
    }
}

TEST_CASE("property: square root of a planar Steiner polynomial is concave") {
    Gen g(19);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = steiner_polynomial_2d(g.convex_polygon(g.integer(3, 10)));
        const double dt = 0.05;
        for (double t = dt; t < 10 - dt; t += dt) {
            const double d2 = std::sqrt(s(t - dt)) - 2 * std::sqrt(s(t)) + std::sqrt(s(t + dt));
            CHECK(d2 <= 1e-10);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec3> p;
        for (int i = 0; i < 12; ++i) p.push_back(g.point3(-2, 2));
        const auto s = steiner_polynomial_3d(p);
        const double dt = 0.05;
        for (double t = dt; t < 10 - dt; t += dt) {
            const double d2 = std::cbrt(s(t - dt)) - 2 * std::cbrt(s(t)) + std::cbrt(s(t + dt));
            CHECK(d2 <= 1e-10);
        }
    }
}
