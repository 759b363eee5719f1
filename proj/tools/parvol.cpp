#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "parvol/diagnostics.hpp"
#include "parvol/disks.hpp"
#include "parvol/errors.hpp"
#include "parvol/exact_1d.hpp"
#include "parvol/numeric.hpp"
#include "parvol/presets.hpp"
#include "parvol/scene_io.hpp"
#include "parvol/steiner.hpp"
#include "parvol/voronoi.hpp"

using namespace parvol;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Common {
    std::string scene;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 1;
    double h = 0.02;
    double tmin = 0.0;
    double tmax = 1.0;
    int steps = 21;
    std::string method = "auto";
    std::int64_t samples = 1'000'000;
    std::string expect;
};

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

json json_number(double x) { return std::isfinite(x) ? json(x) : json(fmt(x)); }

void add_common(CLI::App* sub, Common& c, bool grid = true) {
    sub->add_option("--scene", c.scene, "scene JSON file");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--expect", c.expect, "expected verdict; exit 1 on mismatch")->check(CLI::IsMember({"pass", "fail"}));
    if (!grid) return;
    sub->add_option("--h", c.h, "grid spacing");
    sub->add_option("--tmin", c.tmin);
    sub->add_option("--tmax", c.tmax);
    sub->add_option("--steps", c.steps)->check(CLI::Range(2, 1'000'000));
    sub->add_option("--method", c.method, "auto, exact, grid or montecarlo")
        ->check(CLI::IsMember({"auto", "exact", "grid", "montecarlo"}));
    sub->add_option("--samples", c.samples, "Monte Carlo samples");
}

std::vector<double> t_grid(const Common& c) {
    std::vector<double> ts;
    for (int k = 0; k < c.steps; ++k) ts.push_back(c.tmin + (c.tmax - c.tmin) * k / (c.steps - 1));
    return ts;
}

SceneFile scene_of(const Common& c) {
    if (c.scene.empty()) throw ContractViolation("--scene is required");
    return load_scene(c.scene);
}

StructuringBody body_of(const SceneFile& f) { return f.body ? *f.body : StructuringBody::ball(f.scene.dim); }

ProfileOptions options_of(const Common& c) {
    ProfileOptions o;
    o.h = c.h;
    o.samples = c.samples;
    o.seed = c.seed;
    if (c.method == "exact") o.method = ProfileMethod::exact;
    else if (c.method == "grid") o.method = ProfileMethod::grid;
    else if (c.method == "montecarlo") o.method = ProfileMethod::montecarlo;
    return o;
}

json header(const Common& c, const std::optional<SceneFile>& f, const std::string& command) {
    json j{{"command", command}, {"version", kVersion}, {"seed", c.seed}};
    if (f) j["scene_hash"] = scene_hash(f->scene, f->body);
    return j;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream o(c.out, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + c.out);
    o << text;
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

std::string profile_csv(const VolumeProfile& p) {
    std::string s = "t,V,V_root,band\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += fmt(p.t[i]) + "," + fmt(p.V[i]) + "," + fmt(std::pow(std::max(p.V[i], 0.0), 1.0 / p.n)) + "," +
             fmt(p.band.empty() ? 0.0 : p.band[i]) + "\n";
    return s;
}

json profile_json(const VolumeProfile& p) {
    json j{{"method", p.method.tag()}, {"n", p.n}, {"t", p.t}, {"V", p.V}, {"band", p.band}};
    if (!p.dV.empty()) j["dV"] = p.dV;
    if (p.method.kind == MethodKind::grid) j["grid"] = {{"h", p.method.h}};
    return j;
}

int verdict(const Common& c, bool pass, json j) {
    j["verdict"] = pass ? "pass" : "fail";
    if (!c.expect.empty()) j["expected"] = c.expect;
    emit_json(c, j);
    if (!c.expect.empty() && (c.expect == "pass") != pass) return kExitMismatch;
    return kExitOk;
}

VolumeProfile scene_profile(const Common& c, const SceneFile& f) {
    return profile(f.scene, body_of(f), t_grid(c), options_of(c));
}

std::vector<Vec2> points_2d(const Scene& s) {
    if (s.dim != 2) throw ContractViolation("expected a planar point scene");
    std::vector<Vec2> out;
    for (const auto& p : s.primitives) {
        const auto* pt = std::get_if<PointPrim>(&p.shape);
        if (!pt) throw ContractViolation("expected a scene of points only");
        out.push_back(to_vec2(pt->p));
    }
    return out;
}

std::vector<Vec3> points_3d(const Scene& s) {
    if (s.dim != 3) throw ContractViolation("expected a spatial point scene");
    std::vector<Vec3> out;
    for (const auto& p : s.primitives) {
        const auto* pt = std::get_if<PointPrim>(&p.shape);
        if (!pt) throw ContractViolation("expected a scene of points only");
        out.push_back(to_vec3(pt->p));
    }
    return out;
}

std::vector<Vec2> polygon_of(const Primitive& p) {
    std::vector<Vec2> out;
    for (const auto& e : extreme_points(p, 2)) out.push_back(to_vec2(e));
    return out;
}

Scene hull_scene(const Scene& s) {
    std::vector<Coords> pts;
    for (const auto& p : s.primitives) {
        if (std::holds_alternative<BallPrim>(p.shape)) throw ContractViolation("hullgap: balls are not supported");
        const auto e = extreme_points(p, s.dim);
        pts.insert(pts.end(), e.begin(), e.end());
    }
    const auto hull = convex_hull(pts, s.dim);
    if (s.dim == 2) return Scene{2, {make_polygon(hull.ring())}};
    return Scene{3, {make_polytope(hull.vertices)}};
}

json concavity_json(const ConcavityReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"t_lo", x.t_lo}, {"t_hi", x.t_hi}, {"magnitude", x.magnitude}});
    return {{"exponent", r.exponent}, {"violations", v}, {"t0", json_number(r.t0)}, {"tolerances", {{"user", r.tolerance}}}};
}

int run_presets(const std::string& name, const Common& c) {
    if (name == "list") {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return kExitOk;
    }
    std::vector<std::string> names;
    if (name == "all") names = preset_names();
    else names.push_back(name);
    for (const auto& n : names) {
        const auto all = preset_names();
        if (std::find(all.begin(), all.end(), n) == all.end()) {
            std::cerr << "parvol: unknown preset '" << n << "'\n";
            return kExitUsage;
        }
    }
    std::vector<std::future<PresetResult>> jobs;
    for (const auto& n : names)
        jobs.push_back(std::async(std::launch::async, [n, &c] { return run_preset(n, {c.seed}); }));
    json reports = json::array();
    bool ok = true;
    for (auto& j : jobs) {
        const auto r = j.get();
        ok = ok && r.ok();
        reports.push_back(r.to_json());
    }
    emit_json(c, names.size() == 1 ? reports[0] : json{{"version", kVersion}, {"presets", reports}});
    return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel volumes |A + tB| and their concavity diagnostics", "parvol"};
    app.set_version_flag("--version", std::string("parvol ") + kVersion);
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");
    Common c;
    double exponent = 0.0, tol = 1e-9, delta = 1e-3;
    std::string preset;

    auto* sp = app.add_subcommand("profile", "sampled t -> |A + tB|");
    add_common(sp, c);
    auto* s1 = app.add_subcommand("exact1d", "exact piecewise-affine profile of a 1D scene");
    add_common(s1, c);
    auto* sd = app.add_subcommand("disks", "critical radii and topology of a planar disk union");
    add_common(sd, c);
    auto* ss = app.add_subcommand("steiner", "Steiner coefficients of a single convex primitive");
    add_common(ss, c, false);
    auto* sc = app.add_subcommand("concavity", "second-difference concavity report of V^exponent");
    add_common(sc, c);
    sc->add_option("--exponent", exponent, "default 1/n");
    sc->add_option("--tol", tol);
    auto* sk = app.add_subcommand("kneser", "Kneser inequality and monotone deficit");
    add_common(sk, c);
    auto* si = app.add_subcommand("isoperimetric", "isoperimetric ratio along the parallel sets");
    add_common(si, c);
    auto* sdct = app.add_subcommand("dct", "ratio inequality for two convex polygons (primitives 0 and 1)");
    add_common(sdct, c, false);
    auto* ssch = app.add_subcommand("schneider", "bracket for the Schneider constant c(A)");
    add_common(ssch, c, false);
    ssch->add_option("--samples", c.samples);
    auto* sh = app.add_subcommand("hullgap", "gap between the hull and set profiles");
    add_common(sh, c);
    auto* sf = app.add_subcommand("fiala", "second-derivative bound by the Euler characteristic");
    add_common(sf, c);
    sf->add_option("--delta", delta);
    auto* sst = app.add_subcommand("starcheck", "star condition and the Voronoi threshold t0");
    add_common(sst, c, false);
    auto* spre = app.add_subcommand("preset", "run a reproduction preset (NAME, all, or list)");
    add_common(spre, c, false);
    spre->add_option("name", preset, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*spre) return run_presets(preset, c);

        const SceneFile f = scene_of(c);
        json j = header(c, f, app.get_subcommands().front()->get_name());

        if (*sp) {
            const auto p = scene_profile(c, f);
            if (c.format == "csv") emit(c, profile_csv(p));
            else emit_json(c, (j.update(profile_json(p)), j));
            return kExitOk;
        }
        if (*s1) {
            if (f.scene.dim != 1 || !f.body || !std::holds_alternative<IntervalBody>(f.body->shape))
                throw ContractViolation("exact1d needs a 1D scene with an interval body");
            std::vector<std::pair<double, double>> raw;
            for (const auto& p : f.scene.primitives) {
                const auto e = extreme_points(p, 1);
                double lo = e[0][0], hi = e[0][0];
                for (const auto& x : e) lo = std::min(lo, x[0]), hi = std::max(hi, x[0]);
                raw.emplace_back(lo, hi);
            }
            const auto pw = parallel_profile_1d(IntervalUnion::from(raw),
                                                IntervalUnion::from(std::get<IntervalBody>(f.body->shape).intervals), c.tmax);
            const auto cert = concave_certificate_1d(pw);
            j["breakpoints"] = pw.breakpoints;
            j["slopes"] = pw.slopes;
            j["values"] = pw.values;
            j["concave"] = cert.concave;
            if (cert.first_violation) j["first_violation"] = *cert.first_violation;
            if (c.format == "csv") {
                std::string s = "t,V,slope\n";
                for (std::size_t i = 0; i < pw.breakpoints.size(); ++i)
                    s += fmt(pw.breakpoints[i]) + "," + fmt(pw.values[i]) + "," + fmt(pw.slopes[i]) + "\n";
                emit(c, s);
                return kExitOk;
            }
            return verdict(c, cert.concave, j);
        }
        if (*sd) {
            const auto pts = points_2d(f.scene);
            json crit = json::array();
            for (const auto& r : critical_radii(pts))
                crit.push_back({{"value", r.value},
                                {"kind", r.kind == CriticalRadius::Kind::pairwise ? "pairwise" : "circumradius"},
                                {"sites", r.sites}});
            j["critical_radii"] = crit;
            json rows = json::array();
            std::string s = "t,area,perimeter,components,holes\n";
            for (double t : t_grid(c)) {
                if (!(t > 0.0)) continue;
                const auto m = euler_summary_perturbed(pts, t);
                rows.push_back({{"t", t}, {"area", m.area}, {"perimeter", m.perimeter}, {"components", m.components},
                                {"holes", m.holes}});
                s += fmt(t) + "," + fmt(m.area) + "," + fmt(m.perimeter) + "," + std::to_string(m.components) + "," +
                     std::to_string(m.holes) + "\n";
            }
            j["summaries"] = rows;
            if (c.format == "csv") emit(c, s);
            else emit_json(c, j);
            return kExitOk;
        }
        if (*ss) {
            if (f.scene.primitives.size() != 1) throw ContractViolation("steiner needs exactly one primitive");
            const auto& prim = f.scene.primitives[0];
            SteinerPolynomial poly;
            if (f.scene.dim == 2) {
                if (const auto* b = std::get_if<BallPrim>(&prim.shape)) poly = steiner_polynomial_disk(b->radius);
                else poly = steiner_polynomial_2d(polygon_of(prim));
            } else if (f.scene.dim == 3) {
                std::vector<Vec3> v;
                for (const auto& e : extreme_points(prim, 3)) v.push_back(to_vec3(e));
                poly = steiner_polynomial_3d(v);
            } else {
                throw ContractViolation("steiner supports dimensions 2 and 3");
            }
            j["coefficients"] = poly.c;
            emit_json(c, j);
            return kExitOk;
        }
        if (*sc) {
            const auto p = scene_profile(c, f);
            const double e = exponent > 0.0 ? exponent : 1.0 / p.n;
            const auto r = concavity_report(p, e, tol);
            j["method"] = p.method.tag();
            if (p.method.kind == MethodKind::grid) j["grid"] = {{"h", p.method.h}};
            j.update(concavity_json(r));
            return verdict(c, r.concave(), j);
        }
        if (*sk) {
            const auto p = scene_profile(c, f);
            const auto k = kneser_check(p, p.n);
            const auto m = monotone_deficit_check(p, p.body_volume, p.n);
            j["method"] = p.method.tag();
            j["kneser"] = {{"pass", k.pass}, {"triples", k.checked}};
            if (k.worst)
                j["kneser"]["worst"] = {{"t0", k.worst->t0}, {"t1", k.worst->t1}, {"lambda", k.worst->lambda},
                                        {"excess", k.worst->excess}};
            j["monotone_deficit"] = {{"pass", m.pass}, {"deficit", m.deficit}};
            if (m.first_drop) j["monotone_deficit"]["first_drop_t"] = p.t[*m.first_drop];
            return verdict(c, k.pass && m.pass, j);
        }
        if (*si) {
            const auto p = scene_profile(c, f);
            const auto r = isoperimetric_path(p);
            j["method"] = p.method.tag();
            j["t"] = p.t;
            j["ratio"] = r.ratio;
            j["limit"] = r.limit;
            j["final_deviation"] = r.final_deviation;
            if (c.format == "csv") {
                std::string s = "t,ratio\n";
                for (std::size_t i = 0; i < p.size(); ++i) s += fmt(p.t[i]) + "," + fmt(r.ratio[i]) + "\n";
                emit(c, s);
                return kExitOk;
            }
            return verdict(c, r.non_increasing, j);
        }
        if (*sdct) {
            if (f.scene.dim != 2 || f.scene.primitives.size() != 2) throw ContractViolation("dct needs two planar primitives");
            const auto r = dct_check(polygon_of(f.scene.primitives[0]), polygon_of(f.scene.primitives[1]));
            j["lhs"] = r.lhs;
            j["rhs"] = r.rhs;
            j["slack"] = r.slack;
            return verdict(c, r.pass, j);
        }
        if (*ssch) {
            const auto e = schneider_c(f.scene, std::min<std::int64_t>(c.samples, 1'000'000), c.seed);
            j["c_low"] = e.c_low;
            j["c_high"] = e.c_high;
            j["samples"] = e.samples;
            j["status"] = e.status == SchneiderEstimate::Status::bracketed ? "bracketed" : "upper-bound-only";
            emit_json(c, j);
            return kExitOk;
        }
        if (*sh) {
            const auto ts = t_grid(c);
            const auto pa = profile(f.scene, body_of(f), ts, options_of(c));
            const auto ph = profile(hull_scene(f.scene), body_of(f), ts, options_of(c));
            const auto r = hull_gap(pa, ph);
            j["method"] = {pa.method.tag(), ph.method.tag()};
            j["t"] = ts;
            j["gap"] = r.gap;
            j["nonnegative"] = r.nonnegative;
            j["convex"] = r.convex;
            j["bounded"] = r.bounded;
            j["decreasing_from"] = r.decreasing_from ? json(*r.decreasing_from) : json(nullptr);
            return verdict(c, r.nonnegative && (f.scene.dim != 2 || r.convex) && r.bounded, j);
        }
        if (*sf) {
            const auto pts = points_2d(f.scene);
            std::vector<double> ts;
            for (double t : t_grid(c))
                if (t > delta) ts.push_back(t);
            const auto keep = noncritical_grid(pts, ts, 10.0 * delta * 1.01);
            const auto r = fiala_check(pts, keep, delta);
            json rows = json::array();
            for (const auto& s : r.samples)
                rows.push_back({{"t", s.t}, {"second_difference", s.second_difference}, {"euler", s.euler}, {"pass", s.pass}});
            j["samples"] = rows;
            j["skipped_near_critical"] = ts.size() - keep.size();
            j["delta"] = delta;
            return verdict(c, r.pass, j);
        }
        if (*sst) {
            const auto pts = points_3d(f.scene);
            const auto star = condition_star_check(pts);
            const auto vt = voronoi_t0(pts);
            j["condition_star"] = star.pass;
            if (star.first)
                j["violation"] = {{"facet", star.first->facet}, {"edge", {star.first->a, star.first->b}},
                                  {"vertex", star.first->c}, {"cosine", star.first->cosine},
                                  {"borderline", star.first->borderline}};
            j["t0"] = vt.t0;
            j["diameter"] = vt.diameter;
            json cells = json::array();
            for (const auto& cell : vt.cells)
                cells.push_back({{"site", cell.site}, {"bounded", cell.bounded},
                                 {"containment_radius", json_number(cell.containment_radius)}, {"neighbors", cell.neighbors}});
            j["cells"] = cells;
            return verdict(c, star.pass, j);
        }
    } catch (const ParseError& e) {
        std::cerr << "parvol: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "parvol: invalid scene";
        if (e.primitive_index() >= 0) std::cerr << " (primitive " << e.primitive_index() << ")";
        std::cerr << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "parvol: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
