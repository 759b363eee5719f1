#include <doctest.h>

#include <cmath>
#include <functional>

#include "parvol/diagnostics.hpp"
#include "parvol/disks.hpp"
#include "parvol/errors.hpp"
#include "parvol/steiner.hpp"
#include "support/oracles_2d.hpp"
#include "support/rng.hpp"

using namespace parvol;
using testsupport::Gen;

namespace {

std::vector<double> linspace(double a, double b, int k) {
    std::vector<double> t;
    for (int i = 0; i < k; ++i) t.push_back(a + (b - a) * i / (k - 1));
    return t;
}

VolumeProfile from_function(const std::vector<double>& ts, int n, const std::function<double(double)>& f) {
    VolumeProfile p;
    p.n = n;
    p.t = ts;
    for (double t : ts) p.V.push_back(f(t));
    p.band.assign(ts.size(), 0.0);
    return p;
}

VolumeProfile disk_profile(const std::vector<Vec2>& c, const std::vector<double>& ts) {
    auto p = from_function(ts, 2, [&](double t) { return disk_union_area(c, t); });
    for (double t : ts) p.dV.push_back(disk_union_perimeter(c, t));
    p.body_volume = M_PI;
    return p;
}

std::vector<Vec2> random_walk(Gen& g, int k) {
    std::vector<Vec2> c{{0, 0}};
    while (static_cast<int>(c.size()) < k) {
        const double a = g.uniform(0, 2 * M_PI), r = g.uniform(0.3, 2.0);
        c.push_back(c[g.integer(0, static_cast<int>(c.size()) - 1)] + Vec2{r * std::cos(a), r * std::sin(a)});
    }
    return c;
}

Scene ring_segments(const std::vector<Vec2>& ring) {
    Scene s{2, {}};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto a = ring[i], b = ring[(i + 1) % ring.size()];
        s.primitives.push_back(make_segment({a.x, a.y}, {b.x, b.y}));
    }
    return s;
}

}  // namespace

TEST_CASE("concavity report on closed forms") {
    const auto ts = linspace(0.0, 0.49, 50);
    const auto bad = from_function(ts, 2, [](double t) { return M_PI * ((1 + t) * (1 + t) + t * t); });
    const auto r = concavity_report(bad, 0.5);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].t_lo == doctest::Approx(0.0));
    CHECK(r.violations[0].t_hi == doctest::Approx(0.49));
    CHECK(r.violations[0].magnitude > r.tolerance);
    CHECK(std::isinf(r.t0));

    const auto affine = from_function(linspace(0, 5, 30), 1, [](double t) { return 1 + t; });
    const auto ra = concavity_report(affine, 1.0);
    CHECK(ra.concave());
    CHECK(ra.t0 == 0.0);
    CHECK(affine_defect(affine, 1.0) < 1e-12);

    // Violation confined to the start: convex bump then concave tail.
    const auto mixed = from_function(linspace(0, 4, 41), 1, [](double t) { return 1 + (t < 1 ? t * t : 2 * t - 1 - 0.1 * (t - 1) * (t - 1)); });
    const auto rm = concavity_report(mixed, 1.0);
    REQUIRE(!rm.concave());
    CHECK(rm.t0 == doctest::Approx(1.1));

    CHECK_THROWS_AS(concavity_report(from_function(ts, 2, [](double t) { return t; }), 0.5), ContractViolation);
    CHECK_THROWS_AS(concavity_report(affine, 1.5), ContractViolation);
}

TEST_CASE("grid bands absorb small second differences") {
    auto p = from_function(linspace(1, 2, 11), 1, [](double t) { return t + 1e-4 * (t - 1.5) * (t - 1.5); });
    CHECK(!concavity_report(p, 1.0).concave());
    p.band.assign(p.size(), 1e-4);
    CHECK(concavity_report(p, 1.0).concave());
}

TEST_CASE("connected disk unions are half-concave beyond the connectivity radius") {
    Gen g(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_walk(g, 10);
        const double r = connectivity_radius(c);
        const auto rep = concavity_report(disk_profile(c, linspace(r, r + 6, 121)), 0.5);
        CHECK_MESSAGE(rep.concave(), "trial " << trial);
    }
}

TEST_CASE("connectivity radius") {
    const std::vector<Vec2> two{{0, 0}, {2, 0}};
    CHECK(connectivity_radius(two) == doctest::Approx(1.0));
    const std::vector<Vec2> chain{{0, 0}, {1, 0}, {1, 3}, {1.5, 3}};
    CHECK(connectivity_radius(chain) == doctest::Approx(1.5));
}

TEST_CASE("kneser check") {
    const auto ts = linspace(0, 6, 61);
    const auto steiner = steiner_polynomial_2d(std::vector<Vec2>{{0, 0}, {2, 0}, {2, 1}, {0, 1}});
    const auto convex = from_function(ts, 2, [&](double t) { return steiner(t); });
    const auto kc = kneser_check(convex, 2);
    CHECK(kc.pass);
    CHECK(kc.checked > 100);

    const std::vector<Vec2> two{{0, 0}, {2, 0}};
    auto disks = disk_profile(two, linspace(0.1, 6, 60));
    CHECK(kneser_check(disks, 2).pass);

    const std::size_t k = 39;  // t = 4 = 2 * 2
    disks.V[k] *= 1.1;
    const auto bad = kneser_check(disks, 2);
    REQUIRE(!bad.pass);
    CHECK(bad.worst->lambda * bad.worst->t1 == doctest::Approx(4.0));
}

TEST_CASE("monotone deficit") {
    const auto ts = linspace(0.05, 0.45, 9);
    const auto disk_point = from_function(ts, 2, [](double t) { return M_PI * ((1 + t) * (1 + t) + t * t); });
    CHECK(monotone_deficit_check(disk_point, M_PI, 2).pass);

    // A = {0, 4}, B = [-5,-3] u [3,5]: V(0.4) = 3.2, V(0.45) = 3.1.
    VolumeProfile one;
    one.n = 1;
    one.t = {0.4, 0.45};
    one.V = {3.2, 3.1};
    const auto r = monotone_deficit_check(one, 4.0, 1);
    CHECK(!r.pass);
    CHECK(r.first_drop == 0u);
    CHECK(r.deficit[0] == doctest::Approx(1.6));
    CHECK(r.deficit[1] == doctest::Approx(1.3));
}

TEST_CASE("isoperimetric path examples") {
    const auto ts = linspace(0.1, 4.0, 40);
    const std::vector<Vec2> one{{0, 0}};
    const auto disk = isoperimetric_path(disk_profile(one, ts));
    for (double r : disk.ratio) CHECK(r == doctest::Approx(2 * std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(disk.non_increasing);
    CHECK(disk.final_deviation < 1e-12);

    const auto sq = steiner_polynomial_2d(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto square = from_function(linspace(0, 50, 501), 2, [&](double t) { return sq(t); });
    for (double t : square.t) square.dV.push_back(sq.derivative(t));
    const auto ps = isoperimetric_path(square);
    CHECK(ps.ratio.front() == doctest::Approx(4.0));
    CHECK(ps.non_increasing);
    CHECK(ps.final_deviation < 0.01);

    const std::vector<Vec2> far{{0, 0}, {10, 0}};
    const auto pf = isoperimetric_path(disk_profile(far, linspace(0.5, 10, 20)));
    CHECK(pf.ratio.front() == doctest::Approx(2 * std::sqrt(2 * M_PI)));
    CHECK(pf.non_increasing);

    // Central differences on a profile without derivatives.
    square.dV.clear();
    CHECK(isoperimetric_path(square).non_increasing);
}

TEST_CASE("dct check") {
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> rect{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    const auto eq = dct_check(sq, sq);
    CHECK(eq.lhs == doctest::Approx(0.5));
    CHECK(std::abs(eq.slack) < 1e-12);
    const auto r = dct_check(rect, sq);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(0.6));
    CHECK(r.rhs == doctest::Approx(7.0 / 12.0));
    const std::vector<Vec2> pt{{1, 1}};
    CHECK_THROWS_AS(dct_check(pt, sq), ContractViolation);
}

TEST_CASE("property: dct holds for random convex pairs and is tight for homothets") {
    Gen g(5);
    for (int i = 0; i < 300; ++i) {
        const auto a = g.convex_polygon(g.integer(3, 12));
        const auto b = g.convex_polygon(g.integer(3, 12));
        CHECK(dct_check(a, b).pass);
        std::vector<Vec2> h;
        const double s = g.uniform(0.2, 5.0);
        const Vec2 off = g.point2(-3, 3);
        for (auto v : a) h.push_back(s * v + off);
        CHECK(std::abs(dct_check(a, h).slack) <= 1e-12);
    }
}

TEST_CASE("equivalence check") {
    const Scene square{2, {make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})}};
    const auto ts = linspace(0.0, 0.9, 31);
    const auto convex = equivalence_check(square, StructuringBody::ball(2), ts);
    CHECK(convex.agree());
    CHECK(convex.dilation.concave());

    const Scene point{2, {make_point({3, 4})}};
    const auto pt = equivalence_check(point, StructuringBody::ball(2), ts);
    CHECK(pt.agree());
    CHECK(pt.diagonal.concave());

    const Scene disk_point{2, {make_ball({0, 0}, 1.0), make_point({2, 0})}};
    const auto bad = equivalence_check(disk_point, StructuringBody::ball(2), linspace(0.01, 0.49, 49));
    CHECK(bad.agree());
    CHECK(!bad.dilation.concave());
    CHECK(!bad.scaling.concave());
    CHECK(!bad.interpolation.concave());
    CHECK(!bad.diagonal.concave());
}

TEST_CASE("schneider constant") {
    const Scene tri{2, {make_polygon({{0, 0}, {1, 0}, {0, 1}})}};
    const auto conv = schneider_c(tri, 512);
    CHECK(conv.c_high == 0.0);

    // For T = conv(0, e1, e2) the scaled centroid (1+t)(1,1)/3 stays uncovered until t = 2.
    const Scene verts{2, {make_point({0, 0}), make_point({1, 0}), make_point({0, 1})}};
    auto uncovered = [](double a, double b, double t) {
        const bool in0 = a >= 0 && b >= 0 && a + b <= t;
        const bool in1 = a >= 1 && b >= 0 && a - 1 + b <= t;
        const bool in2 = a >= 0 && b >= 1 && a + b - 1 <= t;
        return !(in0 || in1 || in2);
    };
    for (double t : {0.0, 0.5, 1.0, 1.5, 1.99}) CHECK(uncovered((1 + t) / 3, (1 + t) / 3, t));
    CHECK(!uncovered(1.0, 1.0, 2.0));
    Gen g(2);
    for (int i = 0; i < 20000; ++i) {
        const double a = g.uniform(0, 3), b = g.uniform(0, 3);
        if (a + b <= 3.0) CHECK(!uncovered(a, b, 2.0));
    }
    const auto est = schneider_c(verts, 1024);
    CHECK(est.status == SchneiderEstimate::Status::bracketed);
    CHECK(est.c_low <= 2.0);
    CHECK(est.c_high >= 2.0 - 1e-9);
    CHECK(est.c_high - est.c_low <= 2e-4);

    const auto frame = ring_segments({{0, 0}, {2, 0}, {3, 2}, {1, 3}, {-1, 1}});
    const auto fe = schneider_c(frame, 1024);
    CHECK(fe.c_high <= 1.0 + 1e-9);

    const Scene tetra{3, {make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0}), make_point({0, 0, 1})}};
    const auto te = schneider_c(tetra, 2048, 3, 1e-3);
    CHECK(te.c_high <= 3.0);
    CHECK(te.c_low >= 2.5);
}

TEST_CASE("hull body profile of a square frame") {
    const auto frame = ring_segments({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto ts = linspace(0.0, 3.0, 31);
    const auto p = hull_body_profile_2d(frame, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const double expect = t < 1 ? 4 * t : (1 + t) * (1 + t);
        CHECK(p.V[i] == doctest::Approx(expect).epsilon(1e-10));
    }
    const auto tail = hull_body_profile_2d(frame, linspace(1.0, 10.0, 50));
    CHECK(affine_defect(tail, 0.5) < 1e-9);
}

TEST_CASE("hull gap") {
    const std::vector<Vec2> two{{0, 0}, {2, 0}};
    const auto ts = linspace(0.2, 20.0, 100);
    const auto a = disk_profile(two, ts);
    const auto hull = from_function(ts, 2, [](double t) { return 4 * t + M_PI * t * t; });
    const auto r = hull_gap(a, hull);
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(r.gap[i] == doctest::Approx(4 * ts[i] + M_PI * ts[i] * ts[i] - testsupport::two_disk_area(2.0, ts[i])).epsilon(1e-10));
    CHECK(r.nonnegative);
    REQUIRE(r.decreasing_from);
    CHECK(*r.decreasing_from <= 1.0);
    CHECK(r.final_gap < r.gap[5]);

    const std::vector<Vec2> path{{0, 0}, {1, 0.3}, {2, -0.2}, {2.6, 0.8}, {3.5, 0.6}, {4.2, 1.5}};
    const double rc = connectivity_radius(path);
    const auto tp = linspace(rc, 20.0, 150);
    std::vector<Vec2> ring;
    for (auto v : convex_hull_2d(path).ring()) ring.push_back(v);
    const auto sp = steiner_polynomial_2d(ring);
    const auto rp = hull_gap(disk_profile(path, tp), from_function(tp, 2, [&](double t) { return sp(t); }));
    CHECK(rp.convex);
    CHECK(rp.nonnegative);
    CHECK(rp.final_gap < hull_gap(disk_profile(path, {1.0, 2.0}), from_function({1.0, 2.0}, 2, [&](double t) { return sp(t); })).gap[0]);

    const auto same = hull_gap(hull, hull);
    for (double gp : same.gap) CHECK(gp == 0.0);
    CHECK_THROWS_AS(hull_gap(a, from_function(linspace(0, 1, 5), 2, [](double) { return 1.0; })), ContractViolation);
}

TEST_CASE("fiala bound") {
    const std::vector<Vec2> one{{0, 0}};
    const auto r1 = fiala_check(one, {0.5, 1.0, 7.0});
    CHECK(r1.pass);
    for (const auto& s : r1.samples) CHECK(s.second_difference == doctest::Approx(2 * M_PI).epsilon(1e-5));

    const std::vector<Vec2> far{{0, 0}, {10, 0}};
    const auto r2 = fiala_check(far, {1.0, 3.0, 4.5});
    CHECK(r2.pass);
    for (const auto& s : r2.samples) {
        CHECK(s.euler == 2);
        CHECK(s.second_difference == doctest::Approx(4 * M_PI).epsilon(1e-5));
    }

    const std::vector<Vec2> tri{{0, 0}, {2, 0}, {1, std::sqrt(3.0)}};
    const auto r3 = fiala_check(tri, {1.08});
    CHECK(r3.pass);
    CHECK(r3.samples[0].euler == 0);
    CHECK(r3.samples[0].second_difference <= 1e-6);

    CHECK_THROWS_AS(fiala_check(tri, {1.005}), ContractViolation);
    const auto grid = noncritical_grid(tri, {0.5, 0.995, 1.05, 1.15}, 0.01);
    CHECK(grid == std::vector<double>{0.5, 1.05});
}

TEST_CASE("property: fiala bound on random configurations") {
    Gen g(21);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<Vec2> c;
        const int k = g.integer(3, 8);
        for (int i = 0; i < k; ++i) c.push_back(g.point2(0, 4));
        const auto ts = noncritical_grid(c, linspace(0.05, 4.0, 80), 0.011);
        CHECK(fiala_check(c, ts).pass);
    }
}

TEST_CASE("polynomial fit") {
    std::vector<double> x, y;
    for (int i = 0; i < 9; ++i) {
        x.push_back(0.1 * i);
        y.push_back(8 + 24 * x.back() + 3 * x.back() * x.back());
    }
    const auto c = polynomial_fit(x, y, 2);
    CHECK(c[0] == doctest::Approx(8));
    CHECK(c[1] == doctest::Approx(24));
    CHECK(c[2] == doctest::Approx(3));
    CHECK_THROWS_AS(polynomial_fit(std::span(x).first(2), std::span(y).first(2), 2), ContractViolation);
}

TEST_CASE("property: convex union area agrees with a raster count") {
    Gen g(41);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<std::vector<Vec2>> polys;
        const int k = g.integer(1, 5);
        for (int i = 0; i < k; ++i) polys.push_back(convex_ring(g.convex_polygon(g.integer(3, 8))));
        if (trial % 3 == 0) polys.push_back(polys.front());
        const double h = 0.01;
        long inside = 0;
        for (double x = -5.5 + h / 2; x < 5.5; x += h)
            for (double y = -5.5 + h / 2; y < 5.5; y += h)
                for (const auto& p : polys) {
                    bool in = true;
                    for (std::size_t e = 0; e < p.size() && in; ++e)
                        in = orient2d(p[e], p[(e + 1) % p.size()], {x, y}) >= 0;
                    if (in) {
                        ++inside;
                        break;
                    }
                }
        const double area = convex_union_area(polys);
        CHECK(area == doctest::Approx(inside * h * h).epsilon(0.01));
    }
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> right{{1, 0}, {2, 0}, {2, 1}, {1, 1}};
    CHECK(convex_union_area({sq, right}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(convex_union_area({sq, sq, sq}) == doctest::Approx(1.0).epsilon(1e-14));
}
