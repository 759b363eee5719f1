#include "parvol/presets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "parvol/diagnostics.hpp"
#include "parvol/disks.hpp"
#include "parvol/errors.hpp"
#include "parvol/exact_1d.hpp"
#include "parvol/scene_io.hpp"
#include "parvol/steiner.hpp"
#include "parvol/voronoi.hpp"

namespace parvol {

using nlohmann::json;

namespace {

std::vector<double> linspace(double a, double b, int k) {
    std::vector<double> t;
    for (int i = 0; i < k; ++i) t.push_back(a + (b - a) * i / (k - 1));
    return t;
}

std::string num(double x) {
    std::ostringstream s;
    s.precision(12);
    s << x;
    return s.str();
}

json violations_json(const ConcavityReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"t_lo", x.t_lo}, {"t_hi", x.t_hi}, {"magnitude", x.magnitude}});
    return {{"exponent", r.exponent},
            {"violations", v},
            {"t0", std::isinf(r.t0) ? json("inf") : json(r.t0)},
            {"tolerance", r.tolerance},
            {"verdict", r.concave() ? "concave" : "violations"}};
}

struct Builder {
    PresetResult out;
    std::uint64_t seed = 1;

    void expect(std::string name, bool met, std::string detail = {}) {
        out.expectations.push_back({std::move(name), met, std::move(detail)});
    }
    void scene(const std::string& label, const Scene& s, const std::optional<StructuringBody>& b) {
        out.report["scenes"].push_back({{"label", label}, {"hash", scene_hash(s, b)}});
    }
    void profile(std::string label, VolumeProfile p, bool convex = true) {
        out.profiles.push_back({std::move(label), std::move(p), convex});
    }
};

std::vector<Vec2> random_walk_points(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), len(0.4, 2.0);
    std::vector<Vec2> c{{0, 0}};
    while (static_cast<int>(c.size()) < k) {
        const auto from = std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng);
        const double a = ang(rng), r = len(rng);
        c.push_back(c[from] + Vec2{r * std::cos(a), r * std::sin(a)});
    }
    return c;
}

Scene point_scene(int dim, const std::vector<Coords>& pts) {
    Scene s{dim, {}};
    for (const auto& p : pts) s.primitives.push_back(make_point(p));
    return s;
}

Scene point_scene_2d(const std::vector<Vec2>& pts) {
    Scene s{2, {}};
    for (auto p : pts) s.primitives.push_back(make_point(to_coords(p)));
    return s;
}

Scene boundary_scene(const std::vector<Vec2>& ring) {
    Scene s{2, {}};
    for (std::size_t i = 0; i < ring.size(); ++i)
        s.primitives.push_back(make_segment(to_coords(ring[i]), to_coords(ring[(i + 1) % ring.size()])));
    return s;
}

void interval_union(Builder& b) {
    b.out.description = "1D interval union under an interval: exact profile is concave";
    const Scene a{1,
                  {make_segment({0}, {1}), make_segment({2.5}, {3}), make_point({4}), make_segment({6}, {7.5}),
                   make_point({9.25})}};
    const auto body = StructuringBody::intervals({{-0.5, 1.0}});
    b.scene("A", a, body);
    const auto ts = linspace(0.0, 5.0, 101);
    const auto exact = profile(a, body, ts);
    const auto grid = grid_volume(a, body, 1e-3, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, std::abs(exact.V[i] - grid.V[i]));

    IntervalUnion au = IntervalUnion::from({{0, 1}, {2.5, 3}, {4, 4}, {6, 7.5}, {9.25, 9.25}});
    const auto pw = parallel_profile_1d(au, IntervalUnion::from({{-0.5, 1.0}}), 5.0);
    const auto cert = concave_certificate_1d(pw);
    b.out.report["breakpoints"] = pw.breakpoints;
    b.out.report["slopes"] = pw.slopes;
    b.out.report["grid"] = {{"h", 1e-3}};
    b.out.report["max_grid_deviation"] = worst;
    b.expect("concave certificate", cert.concave);
    b.expect("grid agrees within 2h per endpoint", worst <= 2e-3 * 10, "max |exact - grid| = " + num(worst));
    b.profile("A + tB", exact);
}

void split_body(Builder& b) {
    b.out.description = "A = {0, 4} under B = [-5,-3] u [3,5]: parallel volume is not monotone";
    const Scene a{1, {make_point({0}), make_point({4})}};
    const auto body = StructuringBody::intervals({{-5, -3}, {3, 5}});
    b.scene("A", a, body);
    const auto pw = parallel_profile_1d(IntervalUnion::points({0, 4}), IntervalUnion::from({{-5, -3}, {3, 5}}), 1.0);
    const double v1 = pw.value(0.4), v2 = pw.value(0.45);
    b.out.report["V(0.4)"] = v1;
    b.out.report["V(0.45)"] = v2;
    const auto cert = concave_certificate_1d(pw);
    b.out.report["first_violation"] = cert.first_violation ? json(*cert.first_violation) : json(nullptr);
    const auto p = profile(a, body, {0.4, 0.45});
    const auto mono = monotone_deficit_check(p, body.volume(), 1);
    b.expect("V(0.4) = 3.2", std::abs(v1 - 3.2) <= 1e-12, num(v1));
    b.expect("V(0.45) = 3.1", std::abs(v2 - 3.1) <= 1e-12, num(v2));
    b.expect("profile is not concave", !cert.concave);
    b.expect("deficit check fails for the non-convex body", !mono.pass);
    b.profile("A + tB", p, false);
}

void connected_points(Builder& b) {
    b.out.description = "connected planar point set: V^(1/2) concave past the connectivity radius";
    std::mt19937_64 rng(b.seed);
    const auto c = random_walk_points(rng, 10);
    const Scene a = point_scene_2d(c);
    b.scene("A", a, StructuringBody::ball(2));
    const double rc = connectivity_radius(c);
    const auto ts = linspace(rc, rc + 8.0, 161);
    const auto p = profile(a, StructuringBody::ball(2), ts);
    const auto rep = concavity_report(p, 0.5);
    const auto fts = noncritical_grid(c, ts, 0.011);
    const auto fiala = fiala_check(c, fts);

    std::vector<Vec2> ring = convex_hull_2d(c).ring();
    const auto hull_poly = steiner_polynomial_2d(ring);
    VolumeProfile hull = p;
    for (std::size_t i = 0; i < ts.size(); ++i) hull.V[i] = hull_poly(ts[i]);
    const auto gap = hull_gap(p, hull);

    json pts = json::array();
    for (auto v : c) pts.push_back({v.x, v.y});
    b.out.report["points"] = pts;
    b.out.report["connectivity_radius"] = rc;
    b.out.report["concavity"] = violations_json(rep);
    b.out.report["fiala_points"] = fiala.samples.size();
    b.out.report["hull_gap_final"] = gap.final_gap;
    b.expect("no violations past the connectivity radius", rep.concave());
    b.expect("Fiala bound at non-critical radii", fiala.pass);
    b.expect("hull gap nonnegative and convex", gap.nonnegative && gap.convex);
    b.expect("hull gap decreases", gap.final_gap < gap.gap.front());
    b.profile("A + tB", p);
    b.profile("A + tB, aligned grid", profile(a, StructuringBody::ball(2), linspace(0.05, 8.0, 160)));
}

void disk_and_point(Builder& b) {
    b.out.description = "unit disk plus the point 2e1: V^(1/2) is not concave near 0";
    const Scene a{2, {make_ball({0, 0}, 1.0), make_point({2, 0})}};
    b.scene("A", a, StructuringBody::ball(2));
    const auto ts = linspace(0.0, 0.49, 50);
    const auto p = profile(a, StructuringBody::ball(2), ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        worst = std::max(worst, std::abs(p.V[i] - M_PI * ((1 + ts[i]) * (1 + ts[i]) + ts[i] * ts[i])));
    const auto rep = concavity_report(p, 0.5);
    const auto eq = equivalence_check(p);
    b.out.report["max_formula_deviation"] = worst;
    b.out.report["concavity"] = violations_json(rep);
    b.out.report["equivalence"] = {{"dilation", !eq.dilation.concave()},
                                   {"scaling", !eq.scaling.concave()},
                                   {"interpolation", !eq.interpolation.concave()},
                                   {"diagonal", !eq.diagonal.concave()}};
    b.expect("exact area matches pi((1+t)^2 + t^2)", worst <= 1e-9, num(worst));
    b.expect("violations cover [0, 0.49]", rep.violations.size() == 1 && rep.violations[0].t_lo == ts.front() &&
                                               rep.violations[0].t_hi == ts.back());
    b.expect("all four parametrizations fail", eq.agree() && !eq.dilation.concave());
    b.profile("A + tB", p);
}

void cube_and_segment(Builder& b) {
    b.out.description = "cube plus a long segment in R^3: coefficients and determinant of the low-order polynomial";
    const auto c = counterexample_polynomial_3d(81, 3);
    b.out.report["coefficients"] = {c.a0, c.a1, c.a2};
    b.out.report["a2_over_pi"] = c.a2 / M_PI;
    b.out.report["determinant"] = c.determinant;
    b.expect("a0 = 8", std::abs(c.a0 - 8) <= 1e-12);
    b.expect("a1 = 24", std::abs(c.a1 - 24) <= 1e-12);
    b.expect("a2 / pi = 86", std::abs(c.a2 / M_PI - 86) <= 1e-12, num(c.a2 / M_PI));
    b.expect("determinant positive", c.determinant > 0 && c.nonconcave_at_zero, num(c.determinant));

    const double l = 10.0, h = 0.05;
    const Scene desk{3, {make_box({0, 0, 0}, {1, 1, 1}), make_segment({1, 0, 0}, {l, 0, 0})}};
    b.scene("A(l=10)", desk, StructuringBody::ball(3));
    std::vector<double> ts;
    for (int k = 0; k <= 4; ++k) ts.push_back(k * h);
    const auto g = grid_volume(desk, StructuringBody::ball(3), h, ts);
    const auto fit = polynomial_fit(g.t, g.V, 2);
    const double target = counterexample_polynomial_3d(l, 3).a2;
    const double rel = std::abs(fit[2] / target - 1.0);
    b.out.report["grid"] = {{"h", h}, {"l", l}, {"t", ts}, {"V", g.V}, {"fit", fit}, {"relative_error_a2", rel}};
    b.expect("grid fit recovers a2 = 15 pi within 5%", rel <= 0.05, num(fit[2] / M_PI) + " pi");
    b.profile("A(l=10) + tB grid", g);
}

void hull_boundary(Builder& b) {
    b.out.description = "polygon boundary: |A + t conv(A)|^(1/2) is affine from t = 1";
    const std::vector<Vec2> ring{{0, 0}, {3, 0}, {4, 2}, {1.5, 3.5}, {-1, 1.5}};
    const Scene frame = boundary_scene(ring);
    b.scene("boundary", frame, std::nullopt);
    const auto est = schneider_c(frame, 4096, b.seed);
    const auto ts = linspace(1.0, 10.0, 91);
    const auto p = hull_body_profile_2d(frame, ts);
    const double area = std::abs(polygon_area(ring));
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        worst = std::max(worst, std::abs(p.V[i] / ((1 + ts[i]) * (1 + ts[i]) * area) - 1.0));
    const double defect = affine_defect(p, 0.5);
    b.out.report["boundary"] = {{"c_low", est.c_low}, {"c_high", est.c_high}, {"samples", est.samples},
                                {"affine_defect", defect}, {"max_relative_deviation", worst}};
    b.expect("c <= 1 for a set containing its hull boundary", est.c_high <= 1.0 + 1e-9, num(est.c_high));
    b.expect("V = (1+t)^2 |conv A| on [1, 10]", worst <= 1e-9, num(worst));
    b.expect("V^(1/2) affine on [1, 10]", defect <= 1e-6, num(defect));

    const Scene tri = point_scene(2, {{0, 0}, {1, 0}, {0, 1}});
    b.scene("triangle vertices", tri, std::nullopt);
    const auto te = schneider_c(tri, 4096, b.seed);
    b.out.report["triangle_vertices"] = {{"c_low", te.c_low}, {"c_high", te.c_high}, {"samples", te.samples}};
    b.expect("triangle vertex set: c <= n", te.c_high <= 2.0 + 1e-9,
             "bracket [" + num(te.c_low) + ", " + num(te.c_high) + "]");
    b.profile("A + t conv(A)", p);
}

std::vector<Vec3> tetra_centroid() { return {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {0, 0, 0}}; }

void star_tetra(Builder& b) {
    b.out.description = "regular tetrahedron plus centroid: star condition, Voronoi threshold, 1/3-concavity";
    const auto pts = tetra_centroid();
    std::vector<Coords> cs;
    for (auto p : pts) cs.push_back(to_coords(p));
    const Scene a = point_scene(3, cs);
    b.scene("A", a, StructuringBody::ball(3));
    const auto star = condition_star_check(pts);
    const auto vt = voronoi_t0(pts);
    const auto& cell = vt.cells.back();
    const double h = 0.1;
    const auto rep = star_concavity_verify(pts, vt.t0, 3.0 * vt.t0, h, 21);
    b.out.report["condition_star"] = star.pass;
    b.out.report["t0"] = vt.t0;
    b.out.report["diameter"] = vt.diameter;
    b.out.report["centroid_cell"] = {{"bounded", cell.bounded}, {"containment_radius", cell.containment_radius}};
    b.out.report["grid"] = {{"h", h}};
    b.out.report["concavity"] = violations_json(rep);
    b.expect("star condition holds", star.pass);
    b.expect("t0 >= diam", vt.t0 >= vt.diameter);
    b.expect("centroid cell is bounded", cell.bounded);
    b.expect("no violations on [t0, 3 t0]", rep.concave());
    std::vector<double> ts;
    for (int k = 1; k <= 12; ++k) ts.push_back(0.5 * k);
    b.profile("A + tB grid", grid_volume(a, StructuringBody::ball(3), 0.1, ts));
}

void dct_random(Builder& b) {
    b.out.description = "ratio inequality |A+B|/per(A+B) >= |A|/per(A) + |B|/per(B) for planar convex pairs";
    std::mt19937_64 rng(b.seed);
    std::uniform_int_distribution<int> count(3, 12);
    int passed = 0;
    double min_slack = 1e300, max_homothetic = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto a = random_convex_polygon(rng(), count(rng));
        const auto c = random_convex_polygon(rng(), count(rng));
        const auto r = dct_check(a, c);
        passed += r.pass;
        min_slack = std::min(min_slack, r.slack);
        std::vector<Vec2> h;
        const double s = 0.25 + (rng() % 1000) / 250.0;
        for (auto v : a) h.push_back(s * v + Vec2{1.5, -0.5});
        max_homothetic = std::max(max_homothetic, std::abs(dct_check(a, h).slack));
    }
    b.out.report["pairs"] = 500;
    b.out.report["passed"] = passed;
    b.out.report["min_slack"] = min_slack;
    b.out.report["max_homothetic_slack"] = max_homothetic;
    b.expect("all 500 pairs pass", passed == 500);
    b.expect("homothetic pairs are equality cases", max_homothetic <= 1e-12, num(max_homothetic));
}

void isoperimetric(Builder& b) {
    b.out.description = "isoperimetric ratio along t -> A + tB for convex polygons";
    std::mt19937_64 rng(b.seed);
    std::uniform_int_distribution<int> count(3, 12);
    const auto ts = linspace(0.0, 50.0, 501);
    int monotone = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto poly = random_convex_polygon(rng(), count(rng));
        const Scene s{2, {make_polygon(poly)}};
        const auto p = profile(s, StructuringBody::ball(2), ts);
        const auto path = isoperimetric_path(p);
        monotone += path.non_increasing;
        worst = std::max(worst, path.final_deviation);
        if (i == 0) b.profile("polygon 0", p);
    }
    const Scene disk{2, {make_point({0, 0})}};
    const auto dpath = isoperimetric_path(profile(disk, StructuringBody::ball(2), linspace(0.1, 5.0, 50)));
    const Scene far{2, {make_point({0, 0}), make_point({10, 0})}};
    const auto fpath = isoperimetric_path(profile(far, StructuringBody::ball(2), linspace(0.5, 10.0, 20)));
    b.out.report["polygons"] = 100;
    b.out.report["non_increasing"] = monotone;
    b.out.report["worst_final_deviation"] = worst;
    b.out.report["limit"] = 2.0 * std::sqrt(M_PI);
    b.out.report["two_points_initial_ratio"] = fpath.ratio.front();
    b.expect("ratio non-increasing for every polygon", monotone == 100);
    b.expect("ratio at t = 50 within 1% of 2 sqrt(pi)", worst <= 0.01, num(worst));
    b.expect("disk ratio constant", dpath.non_increasing && dpath.final_deviation <= 1e-12);
    b.expect("two distant points start at 2 sqrt(2 pi)",
             std::abs(fpath.ratio.front() - 2.0 * std::sqrt(2.0 * M_PI)) <= 1e-9 && fpath.non_increasing);
}

using Runner = std::function<void(Builder&)>;

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> r{
        {"prop31-1d", interval_union},
        {"remark-nonmonotone-1d", split_body},
        {"thm32-connected-2d", connected_points},
        {"prop33-counterexample", disk_and_point},
        {"prop35-counterexample-3d", cube_and_segment},
        {"prop36-hull-affine", hull_boundary},
        {"star-tetra-centroid", star_tetra},
        {"dct-2d-random", dct_random},
        {"isoperimetric-path", isoperimetric},
    };
    return r;
}

}  // namespace

bool PresetResult::ok() const {
    return std::all_of(expectations.begin(), expectations.end(), [](const Expectation& e) { return e.met; });
}

json PresetResult::to_json() const {
    json j = report;
    j["preset"] = name;
    j["description"] = description;
    j["version"] = kVersion;
    if (!j.contains("grid")) j["grid"] = nullptr;
    if (!j.contains("scenes")) j["scenes"] = json::array();
    json ex = json::array();
    for (const auto& e : expectations) ex.push_back({{"name", e.name}, {"met", e.met}, {"detail", e.detail}});
    j["expectations"] = ex;
    j["verdict"] = ok() ? "pass" : "fail";
    return j;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) names.push_back(k);
    return names;
}

PresetResult run_preset(const std::string& name, const PresetOptions& options) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ContractViolation("unknown preset '" + name + "'");
    Builder b;
    b.seed = options.seed;
    b.out.name = name;
    b.out.report = json::object();
    b.out.report["seed"] = options.seed;
    it->second(b);
    return std::move(b.out);
}

std::vector<Vec2> random_convex_polygon(std::uint64_t seed, int k) {
    if (k < 3) throw ContractViolation("random_convex_polygon: needs at least 3 vertices");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), axis(0.5, 3.0), shift(-2.0, 2.0);
    for (;;) {
        std::vector<double> a;
        for (int i = 0; i < k; ++i) a.push_back(ang(rng));
        std::sort(a.begin(), a.end());
        const double rx = axis(rng), ry = axis(rng), cx = shift(rng), cy = shift(rng);
        std::vector<Vec2> out;
        for (double t : a) out.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
        if (std::abs(polygon_area(out)) > 1e-3) return out;
    }
}

}  // namespace parvol
