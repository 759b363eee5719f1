#include "parvol/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "parvol/disks.hpp"
#include "parvol/errors.hpp"
#include "parvol/steiner.hpp"

namespace parvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2 * (chord value at t[i] - f[i]); the usual second difference on a uniform grid.
double second_difference(const std::vector<double>& t, const std::vector<double>& f, std::size_t i) {
    const double w = (t[i] - t[i - 1]) / (t[i + 1] - t[i - 1]);
    return 2.0 * ((1.0 - w) * f[i - 1] + w * f[i + 1] - f[i]);
}

void check_profile(const VolumeProfile& p, std::size_t min_size, const char* who) {
    if (p.t.size() < min_size || p.V.size() != p.t.size())
        throw ContractViolation(std::string(who) + ": profile needs at least " + std::to_string(min_size) + " samples");
    for (std::size_t i = 1; i < p.t.size(); ++i)
        if (!(p.t[i] > p.t[i - 1])) throw ContractViolation(std::string(who) + ": t grid must be increasing");
}

double band_at(const VolumeProfile& p, std::size_t i) { return p.band.size() == p.t.size() ? p.band[i] : 0.0; }

std::optional<std::size_t> grid_index(const std::vector<double>& t, double x) {
    const double eps = 1e-9 * std::max(1.0, std::abs(x));
    auto it = std::lower_bound(t.begin(), t.end(), x - eps);
    if (it != t.end() && std::abs(*it - x) <= eps) return static_cast<std::size_t>(it - t.begin());
    return std::nullopt;
}

double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

VolumeProfile reparametrize(const VolumeProfile& p, const std::vector<std::size_t>& idx, auto&& arg, auto&& scale) {
    VolumeProfile out;
    out.n = p.n;
    out.method = p.method;
    std::vector<std::pair<double, std::size_t>> order;
    for (auto i : idx) order.push_back({arg(p.t[i]), i});
    std::sort(order.begin(), order.end());
    for (auto [x, i] : order) {
        const double s = scale(p.t[i]);
        out.t.push_back(x);
        out.V.push_back(s * p.V[i]);
        out.band.push_back(s * band_at(p, i));
    }
    return out;
}

}  // namespace

ConcavityReport concavity_report(const VolumeProfile& profile, double exponent, double tol) {
    check_profile(profile, 3, "concavity_report");
    if (!(exponent > 0.0 && exponent <= 1.0)) throw ContractViolation("concavity_report: exponent must lie in (0, 1]");
    for (double v : profile.V)
        if (!(v > 0.0)) throw ContractViolation("concavity_report: profile has a nonpositive volume");

    const auto& t = profile.t;
    const std::size_t m = t.size();
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = std::pow(profile.V[i], exponent);

    ConcavityReport r;
    r.exponent = exponent;
    r.tolerance = tol;
    r.t0 = t.front();
    std::optional<std::size_t> last;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double d = second_difference(t, f, i);
        const double gain = std::max(1.0, exponent * std::pow(profile.V[i], exponent - 1.0));
        const double eff = tol + (band_at(profile, i - 1) + 2.0 * band_at(profile, i) + band_at(profile, i + 1)) * gain;
        if (!(d > eff)) continue;
        if (!r.violations.empty() && r.violations.back().t_hi >= t[i - 1]) {
            r.violations.back().t_hi = t[i + 1];
            r.violations.back().magnitude = std::max(r.violations.back().magnitude, d);
        } else {
            r.violations.push_back({t[i - 1], t[i + 1], d});
        }
        last = i;
    }
    if (last) r.t0 = *last + 2 < m ? t[*last + 1] : kInf;
    return r;
}

double affine_defect(const VolumeProfile& profile, double exponent) {
    check_profile(profile, 3, "affine_defect");
    std::vector<double> f;
    for (double v : profile.V) f.push_back(std::pow(std::max(v, 0.0), exponent));
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) worst = std::max(worst, std::abs(second_difference(profile.t, f, i)));
    return worst;
}

KneserResult kneser_check(const VolumeProfile& profile, int n, double tol) {
    check_profile(profile, 2, "kneser_check");
    const auto& t = profile.t;
    const auto& V = profile.V;
    KneserResult r;
    for (double lam : {1.5, 2.0, 3.0}) {
        const double ln = std::pow(lam, n);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto li = grid_index(t, lam * t[i]);
            if (!li) continue;
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                const auto lj = grid_index(t, lam * t[j]);
                if (!lj) continue;
                const double lhs = V[*lj] - V[*li];
                const double rhs = ln * (V[j] - V[i]);
                const double slack = band_at(profile, *lj) + band_at(profile, *li) +
                                     ln * (band_at(profile, j) + band_at(profile, i)) + tol * (1.0 + std::abs(V[*lj]));
                const double excess = lhs - rhs - slack;
                ++r.checked;
                if (!r.worst || excess > r.worst->excess) r.worst = KneserTriple{t[i], t[j], lam, excess};
            }
        }
    }
    r.pass = !r.worst || r.worst->excess <= 0.0;
    return r;
}

MonotoneResult monotone_deficit_check(const VolumeProfile& profile, double body_volume, int n, double tol) {
    check_profile(profile, 2, "monotone_deficit_check");
    MonotoneResult r;
    for (std::size_t i = 0; i < profile.size(); ++i)
        r.deficit.push_back(profile.V[i] - std::pow(profile.t[i], n) * body_volume);
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        const double slack = band_at(profile, i) + band_at(profile, i + 1) + tol * (1.0 + std::abs(profile.V[i + 1]));
        if (r.deficit[i + 1] < r.deficit[i] - slack) {
            r.pass = false;
            r.first_drop = i;
            break;
        }
    }
    return r;
}

IsoperimetricPath isoperimetric_path(const VolumeProfile& profile, double tol) {
    check_profile(profile, 2, "isoperimetric_path");
    const int n = profile.n;
    if (n < 1) throw ContractViolation("isoperimetric_path: profile has no dimension");
    const auto& t = profile.t;
    const auto& V = profile.V;
    const std::size_t m = t.size();
    const bool exact = profile.dV.size() == m;
    const double p = static_cast<double>(n - 1) / n;

    IsoperimetricPath out;
    std::vector<double> err(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(V[i] > 0.0)) throw ContractViolation("isoperimetric_path: profile has a nonpositive volume");
        double d = 0.0, derr = 0.0;
        if (exact) {
            d = profile.dV[i];
        } else {
            // Derivative of the quadratic through three neighbouring samples (two when m = 2).
            if (m == 2) {
                d = (V[1] - V[0]) / (t[1] - t[0]);
                derr = (band_at(profile, 0) + band_at(profile, 1)) / (t[1] - t[0]);
            } else {
                const std::size_t j0 = i == 0 ? 0 : (i + 1 == m ? m - 3 : i - 1);
                for (std::size_t k = j0; k < j0 + 3; ++k) {
                    double w = 0.0;
                    if (k == i) {
                        for (std::size_t l = j0; l < j0 + 3; ++l)
                            if (l != i) w += 1.0 / (t[i] - t[l]);
                    } else {
                        w = 1.0 / (t[k] - t[i]);
                        for (std::size_t l = j0; l < j0 + 3; ++l)
                            if (l != k && l != i) w *= (t[i] - t[l]) / (t[k] - t[l]);
                    }
                    d += w * V[k];
                    derr += std::abs(w) * band_at(profile, k);
                }
            }
        }
        const double root = std::pow(V[i], p);
        out.ratio.push_back(d / root);
        err[i] = derr / root + std::abs(d / root) * p * band_at(profile, i) / V[i];
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double slack = tol * (1.0 + std::abs(out.ratio[i])) + err[i] + err[i + 1];
        if (out.ratio[i + 1] > out.ratio[i] + slack) {
            out.non_increasing = false;
            out.first_increase = i;
            break;
        }
    }
    out.limit = n * std::pow(unit_ball_volume(n), 1.0 / n);
    out.final_deviation = std::abs(out.ratio.back() / out.limit - 1.0);
    return out;
}

DctResult dct_check(std::span<const Vec2> a, std::span<const Vec2> b) {
    const auto ra = convex_ring(a);
    const auto rb = convex_ring(b);
    const double pa = polygon_perimeter(ra), pb = polygon_perimeter(rb);
    if (!(pa > 0.0) || !(pb > 0.0)) throw ContractViolation("dct_check: zero perimeter");
    const double aa = std::abs(polygon_area(ra)), ab = std::abs(polygon_area(rb));
    const double sum_area = aa + 2.0 * mixed_area(ra, rb) + ab;
    DctResult r;
    r.lhs = sum_area / (pa + pb);
    r.rhs = aa / pa + ab / pb;
    r.slack = r.lhs - r.rhs;
    r.pass = r.lhs >= r.rhs - 1e-12;
    return r;
}

bool EquivalenceResult::agree() const {
    const bool c = dilation.concave();
    return scaling.concave() == c && interpolation.concave() == c && diagonal.concave() == c;
}

EquivalenceResult equivalence_check(const VolumeProfile& profile, double tol) {
    check_profile(profile, 3, "equivalence_check");
    const int n = profile.n;
    const double e = 1.0 / n;
    std::vector<std::size_t> pos, below_one;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile.t[i] <= 0.0) continue;
        pos.push_back(i);
        if (profile.t[i] < 1.0) below_one.push_back(i);
    }
    auto id = [](double t) { return t; };
    auto one = [](double) { return 1.0; };

    EquivalenceResult r;
    r.dilation = concavity_report(reparametrize(profile, pos, id, one), e, tol);
    r.scaling = concavity_report(
        reparametrize(profile, pos, [](double t) { return 1.0 / t; }, [n](double t) { return std::pow(t, -n); }), e, tol);
    r.interpolation = concavity_report(
        reparametrize(profile, pos, [](double t) { return t / (1.0 + t); },
                      [n](double t) { return std::pow(1.0 + t, -n); }),
        e, tol);
    r.diagonal = concavity_report(
        reparametrize(profile, below_one, [](double t) { return t / (1.0 - t); },
                      [n](double t) { return std::pow(1.0 - t, -n); }),
        e, tol);
    return r;
}

EquivalenceResult equivalence_check(const Scene& scene, const StructuringBody& body, const std::vector<double>& ts,
                                    const ProfileOptions& options, double tol) {
    if (!body.is_convex()) throw ContractViolation("equivalence_check: B must be convex");
    return equivalence_check(profile(scene, body, ts, options), tol);
}

SchneiderEstimate schneider_c(const Scene& scene, std::int64_t samples, std::uint64_t seed, double resolution) {
    const int n = scene.dim;
    if (n != 2 && n != 3) throw ContractViolation("schneider_c: needs a planar or spatial scene");
    if (samples < 1) throw ContractViolation("schneider_c: samples must be positive");
    scene.validate();

    std::vector<Coords> pts;
    for (const auto& p : scene.primitives) {
        if (std::holds_alternative<BallPrim>(p.shape)) throw ContractViolation("schneider_c: balls are not supported");
        const auto e = extreme_points(p, n);
        pts.insert(pts.end(), e.begin(), e.end());
    }
    const ConvexPolytope hull = convex_hull(pts, n);

    Coords c{};
    for (auto v : hull.vertices) c = c + to_coords(v);
    c = (1.0 / static_cast<double>(hull.vertices.size())) * c;
    std::vector<Coords> shifted;
    for (auto v : hull.vertices) shifted.push_back(to_coords(v) - c);
    const Gauge gauge(StructuringBody::polytope(shifted, n));

    // Test points y in conv(A); coverage at t is checked at (1 + t) y.
    std::vector<Coords> ys;
    for (auto v : hull.vertices) ys.push_back(to_coords(v));
    ys.push_back(c);
    if (n == 2) {
        const auto ring = hull.ring();
        for (std::size_t i = 0; i < ring.size(); ++i)
            ys.push_back(to_coords(0.5 * (ring[i] + ring[(i + 1) % ring.size()])));
    } else {
        for (const auto& e : hull.edges) ys.push_back(to_coords(0.5 * (hull.vertices[e.a] + hull.vertices[e.b])));
        for (const auto& f : hull.facets) {
            Vec3 s{};
            for (int k : f.loop) s = s + hull.vertices[k];
            ys.push_back(to_coords((1.0 / static_cast<double>(f.loop.size())) * s));
        }
    }
    const auto [lo, hi] = scene.bounding_box();
    const unsigned bases[3] = {2, 3, 5};
    std::int64_t accepted = 0;
    for (std::uint64_t k = seed * 1000003ULL + 1; accepted < samples && k < seed * 1000003ULL + 1 + 64ULL * samples; ++k) {
        Coords y{};
        for (int i = 0; i < n; ++i) y[i] = lo[i] + (hi[i] - lo[i]) * radical_inverse(k, bases[i]);
        if (!hull.contains(to_vec3(y), 0.0)) continue;
        ys.push_back(y);
        ++accepted;
    }

    auto covered = [&](double t) {
        std::vector<char> ok(static_cast<std::size_t>(thread_count()), 1);
        detail::parallel_ranges(0, static_cast<long>(ys.size()), [&](int w, long a, long b) {
            for (long i = a; i < b && ok[w]; ++i) {
                const Coords x = (1.0 + t) * ys[i] - t * c;
                if (gauge.distance(x, scene) > t + 1e-9) ok[w] = 0;
            }
        });
        return std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
    };

    SchneiderEstimate est;
    est.samples = static_cast<std::int64_t>(ys.size());
    if (covered(0.0)) return est;
    est.status = SchneiderEstimate::Status::bracketed;
    double a = 0.0, b = static_cast<double>(n);
    if (!covered(b)) {
        est.c_low = est.c_high = b;
        return est;
    }
    while (b - a > resolution) {
        const double mid = 0.5 * (a + b);
        (covered(mid) ? b : a) = mid;
    }
    est.c_low = a;
    est.c_high = b;
    return est;
}

VolumeProfile hull_body_profile_2d(const Scene& scene, const std::vector<double>& ts) {
    if (scene.dim != 2) throw ContractViolation("hull_body_profile_2d: scene must be planar");
    scene.validate();
    std::vector<std::vector<Vec2>> pieces;
    std::vector<Vec2> all;
    for (const auto& p : scene.primitives) {
        if (std::holds_alternative<BallPrim>(p.shape) || std::holds_alternative<ProductPrim>(p.shape))
            throw ContractViolation("hull_body_profile_2d: only polygonal primitives are supported");
        if (const auto* poly = std::get_if<PolygonPrim>(&p.shape); poly && !poly->convex)
            throw ContractViolation("hull_body_profile_2d: non-convex polygons are not supported");
        std::vector<Vec2> piece;
        for (const auto& e : extreme_points(p, 2)) piece.push_back(to_vec2(e));
        all.insert(all.end(), piece.begin(), piece.end());
        pieces.push_back(std::move(piece));
    }
    const auto k = convex_hull_2d(all).ring();

    VolumeProfile out;
    out.n = 2;
    out.method.kind = MethodKind::exact;
    out.method.detail = "hull-body";
    out.body_volume = std::abs(polygon_area(k));
    for (double t : ts) {
        if (!(t >= 0.0)) throw ContractViolation("hull_body_profile_2d: t must be nonnegative");
        std::vector<Vec2> tk;
        for (auto v : k) tk.push_back(t * v);
        std::vector<std::vector<Vec2>> sums;
        for (const auto& piece : pieces) {
            auto sum = minkowski_sum_convex(piece, tk);
            if (sum.size() >= 3) sums.push_back(std::move(sum));
        }
        out.t.push_back(t);
        out.V.push_back(convex_union_area(sums));
        out.band.push_back(0.0);
    }
    return out;
}

double convex_union_area(const std::vector<std::vector<Vec2>>& polys) {
    // Green's theorem over the parts of each edge not covered by another polygon. Shared
    // edges with equal direction belong to the lowest index; opposite edges cancel.
    Vec2 origin{};
    double scale = 0.0;
    std::size_t count = 0;
    for (const auto& p : polys)
        for (auto v : p) origin = origin + v, ++count;
    if (count == 0) return 0.0;
    origin = (1.0 / static_cast<double>(count)) * origin;
    for (const auto& p : polys)
        for (auto v : p) scale = std::max(scale, norm(v - origin));
    const double tol = 1e-12 * std::max(scale, 1e-300);

    double area = 0.0;
    std::vector<std::pair<double, double>> cover;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const auto& pi = polys[i];
        for (std::size_t e = 0; e < pi.size(); ++e) {
            const Vec2 p = pi[e] - origin, q = pi[(e + 1) % pi.size()] - origin;
            cover.clear();
            for (std::size_t j = 0; j < polys.size(); ++j) {
                if (j == i) continue;
                const auto& pj = polys[j];
                double lo = 0.0, hi = 1.0;
                for (std::size_t f = 0; f < pj.size() && lo < hi; ++f) {
                    const Vec2 a = pj[f] - origin, b = pj[(f + 1) % pj.size()] - origin;
                    const Vec2 d = b - a;
                    const double len = norm(d);
                    const double g0 = cross(d, p - a) / len, g1 = cross(d, q - a) / len;
                    if (std::abs(g0) <= tol && std::abs(g1) <= tol) {
                        if (dot(d, q - p) > 0.0 && j > i) hi = lo;
                        continue;
                    }
                    if (g0 < 0.0 && g1 < 0.0) hi = lo;
                    else if (g0 < 0.0) lo = std::max(lo, g0 / (g0 - g1));
                    else if (g1 < 0.0) hi = std::min(hi, g0 / (g0 - g1));
                }
                if (lo < hi) cover.emplace_back(lo, hi);
            }
            std::sort(cover.begin(), cover.end());
            double s = 0.0;
            auto add = [&](double u0, double u1) {
                if (u1 <= u0) return;
                area += 0.5 * cross(p + u0 * (q - p), p + u1 * (q - p));
            };
            for (const auto& [lo, hi] : cover) {
                add(s, lo);
                s = std::max(s, hi);
            }
            add(s, 1.0);
        }
    }
    return area;
}

HullGapResult hull_gap(const VolumeProfile& a, const VolumeProfile& hull, double tol) {
    if (a.size() != hull.size()) throw ContractViolation("hull_gap: profiles have different grids");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.t[i] - hull.t[i]) > 1e-12 * std::max(1.0, std::abs(a.t[i])))
            throw ContractViolation("hull_gap: profiles have different grids");
    check_profile(a, 2, "hull_gap");
    const int n = std::max(a.n, hull.n);
    const std::size_t m = a.size();

    HullGapResult r;
    std::vector<double> slack(m);
    for (std::size_t i = 0; i < m; ++i) {
        r.gap.push_back(hull.V[i] - a.V[i]);
        slack[i] = band_at(a, i) + band_at(hull, i) + tol * (1.0 + std::abs(hull.V[i]));
        if (r.gap[i] < -slack[i]) r.nonnegative = false;
    }
    r.final_gap = r.gap.back();

    if (n == 2) {
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double eff = slack[i - 1] + 2.0 * slack[i] + slack[i + 1];
            if (second_difference(a.t, r.gap, i) < -eff) r.convex = false;
        }
    }
    std::size_t from = m - 1;
    while (from > 0 && r.gap[from] <= r.gap[from - 1] + slack[from] + slack[from - 1]) --from;
    if (from + 1 < m) r.decreasing_from = a.t[from];

    std::vector<double> scaled;
    for (std::size_t i = 0; i < m; ++i) scaled.push_back(r.gap[i] * std::pow(std::max(a.t[i], 1.0), 3 - n));
    const std::size_t half = std::max<std::size_t>(1, m / 2);
    const double early = *std::max_element(scaled.begin(), scaled.begin() + half);
    for (std::size_t i = half; i < m; ++i)
        if (scaled[i] > early + slack[i] * std::pow(std::max(a.t[i], 1.0), 3 - n) + tol) r.bounded = false;
    return r;
}

FialaResult fiala_check(std::span<const Vec2> centers, const std::vector<double>& ts, double delta) {
    if (centers.empty()) throw ContractViolation("fiala_check: no centers");
    if (!(delta > 0.0)) throw ContractViolation("fiala_check: step must be positive");
    const auto crit = critical_radii(centers);
    FialaResult out;
    for (double t : ts) {
        if (!(t > delta)) throw ContractViolation("fiala_check: t must exceed the step");
        for (const auto& c : crit)
            if (std::abs(t - c.value) < 10.0 * delta)
                throw ContractViolation("fiala_check: t = " + std::to_string(t) + " is within 10 steps of a critical radius");
        const double v0 = disk_union_area(centers, t);
        const double d2 = (disk_union_area(centers, t + delta) - 2.0 * v0 + disk_union_area(centers, t - delta)) /
                          (delta * delta);
        const auto s = euler_summary(centers, t);
        FialaSample f{t, d2, s.euler(), true};
        f.pass = d2 <= 2.0 * M_PI * s.euler() + 1e-6 * (1.0 + v0);
        out.pass = out.pass && f.pass;
        out.samples.push_back(f);
    }
    return out;
}

std::vector<double> noncritical_grid(std::span<const Vec2> centers, const std::vector<double>& ts, double margin) {
    const auto crit = critical_radii(centers);
    std::vector<double> out;
    for (double t : ts) {
        auto it = std::lower_bound(crit.begin(), crit.end(), t - margin,
                                   [](const CriticalRadius& c, double x) { return c.value < x; });
        if (it == crit.end() || it->value > t + margin) out.push_back(t);
    }
    return out;
}

double connectivity_radius(std::span<const Vec2> centers) {
    const std::size_t m = centers.size();
    if (m == 0) throw ContractViolation("connectivity_radius: no centers");
    std::vector<double> best(m, kInf);
    std::vector<char> done(m, 0);
    best[0] = 0.0;
    double longest = 0.0;
    for (std::size_t step = 0; step < m; ++step) {
        std::size_t u = m;
        for (std::size_t i = 0; i < m; ++i)
            if (!done[i] && (u == m || best[i] < best[u])) u = i;
        done[u] = 1;
        longest = std::max(longest, best[u]);
        for (std::size_t i = 0; i < m; ++i)
            if (!done[i]) best[i] = std::min(best[i], norm(centers[i] - centers[u]));
    }
    return 0.5 * longest;
}

std::vector<double> polynomial_fit(std::span<const double> x, std::span<const double> y, int degree) {
    if (x.size() != y.size() || degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1)
        throw ContractViolation("polynomial_fit: not enough samples");
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd a(m, degree + 1);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double p = 1.0;
        for (int k = 0; k <= degree; ++k, p *= x[i]) a(i, k) = p;
        b(i) = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

}  // namespace parvol
