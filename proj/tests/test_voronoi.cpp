#include <doctest.h>

#include <cmath>

#include "parvol/errors.hpp"
#include "parvol/geom_core.hpp"
#include "parvol/voronoi.hpp"
#include "support/oracles_3d.hpp"
#include "support/rng.hpp"

using namespace parvol;
using testsupport::Gen;

namespace {

std::vector<Vec3> regular_tetrahedron() { return {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}; }

}  // namespace

TEST_CASE("condition star on tetrahedra") {
    CHECK(condition_star_check(regular_tetrahedron()).pass);

    const std::vector<Vec3> corner{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto r = condition_star_check(corner);
    REQUIRE(!r.pass);
    CHECK(r.first->c == 0);
    CHECK(r.first->borderline);
    CHECK(std::abs(r.first->cosine) < 1e-12);

    const std::vector<Vec3> obtuse{{0, 0, 0}, {4, 0, 0}, {2, 0.5, 0}, {2, 0, 3}};
    const auto o = condition_star_check(obtuse);
    REQUIRE(!o.pass);
    CHECK(!o.first->borderline);
    CHECK(o.first->cosine < 0);

    const std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    CHECK_THROWS_AS(condition_star_check(flat), DegeneracyError);
}

TEST_CASE("voronoi threshold examples") {
    const std::vector<Vec3> two{{0, 0, 0}, {3, 0, 0}};
    const auto t2 = voronoi_t0(two);
    CHECK(t2.t0 == doctest::Approx(3.0));
    CHECK(!t2.cells[0].bounded);
    CHECK(!t2.cells[1].bounded);

    const auto tet = regular_tetrahedron();
    const auto tt = voronoi_t0(tet);
    CHECK(tt.t0 == doctest::Approx(2 * std::sqrt(2.0)));
    for (const auto& c : tt.cells) CHECK(!c.bounded);

    auto withc = tet;
    withc.push_back({0, 0, 0});
    const auto tc = voronoi_t0(withc);
    REQUIRE(tc.cells[4].bounded);
    CHECK(tc.cells[4].vertices.size() == 4);
    CHECK(tc.cells[4].neighbors == std::vector<int>{0, 1, 2, 3});
    // Dual tetrahedron with inradius sqrt(3)/2 has circumradius three times that.
    CHECK(tc.cells[4].containment_radius == doctest::Approx(1.5 * std::sqrt(3.0)));
    CHECK(tc.t0 == doctest::Approx(2 * std::sqrt(2.0)));
    const double oracle = testsupport::cell_radius_oracle(withc, 4, 3.0, 0.05);
    CHECK(std::abs(oracle - tc.cells[4].containment_radius) < 1e-2);

    CHECK_THROWS_AS(voronoi_t0(std::vector<Vec3>{{0, 0, 0}}), ContractViolation);
}

TEST_CASE("property: cell vertices are equidistant and nothing is closer") {
    Gen g(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vec3> pts;
        const int k = g.integer(6, 10);
        for (int i = 0; i < k; ++i) pts.push_back(g.point3(-2, 2));
        const auto r = voronoi_t0(pts);
        CHECK(r.t0 >= r.diameter);
        for (const auto& c : r.cells) {
            if (!c.bounded) continue;
            for (auto v : c.vertices) {
                const double d = norm(v - pts[c.site]);
                int ties = 0;
                for (int j = 0; j < k; ++j) {
                    const double dj = norm(v - pts[j]);
                    CHECK(dj >= d - 1e-8);
                    if (j != c.site && std::abs(dj - d) <= 1e-8) ++ties;
                }
                CHECK(ties >= 3);
            }
        }
    }
}

TEST_CASE("property: cells partition the hull and realise the distance to A") {
    Gen g(32);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Vec3> pts;
        const int k = g.integer(6, 10);
        for (int i = 0; i < k; ++i) pts.push_back(g.point3(-2, 2));
        const auto hull = convex_hull_3d(pts);
        Scene scene{3, {}};
        for (auto p : pts) scene.primitives.push_back(make_point(to_coords(p)));
        const auto r = voronoi_t0(pts);
        std::vector<ConvexPolytope> bounded;
        for (int s = 0; s < 300; ++s) {
            const Vec3 x = g.point3(-2, 2);
            if (!hull.contains(x)) continue;
            const int owner = testsupport::nearest_site(pts, x);
            int owners = 0;
            for (int j = 0; j < k; ++j)
                if (norm(x - pts[j]) <= norm(x - pts[owner]) + 1e-8) ++owners;
            CHECK(owners >= 1);
            CHECK(gauge_distance(to_coords(x), scene, StructuringBody::ball(3)) == doctest::Approx(norm(x - pts[owner])));
            const auto& cell = r.cells[owner];
            if (cell.bounded) {
                CHECK(norm(x - pts[owner]) <= cell.containment_radius + 1e-9);
                CHECK(convex_hull_3d(cell.vertices).contains(x, 1e-7));
            }
        }
    }
}

TEST_CASE("star concavity verification") {
    auto pts = regular_tetrahedron();
    pts.push_back({0, 0, 0});
    const double t0 = voronoi_t0(pts).t0;
    const auto rep = star_concavity_verify(pts, t0, 2 * t0, 0.15, 11);
    CHECK(rep.concave());
    CHECK(rep.exponent == doctest::Approx(1.0 / 3.0));

    const std::vector<Vec3> one{{0.3, 0.1, 0.2}};
    CHECK(star_concavity_verify(one, 1.0, 4.0, 0.1, 11).concave());

    const std::vector<Vec3> corner{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK_THROWS_AS(star_concavity_verify(corner, 1.5, 3.0), ContractViolation);
    CHECK_NOTHROW(star_concavity_verify(corner, 1.5, 3.0, 0.1, 5, true));
}
