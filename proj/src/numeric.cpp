#include "parvol/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "parallel.hpp"
#include "parvol/disks.hpp"
#include "parvol/errors.hpp"
#include "parvol/exact_1d.hpp"
#include "parvol/steiner.hpp"

namespace parvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCellBudget = 2147483648.0;  // 2^31
constexpr double kEdtCellBudget = 134217728.0;  // 2^27, memory-bound
constexpr std::size_t kDirectPrimitiveLimit = 64;

void check_ts(const std::vector<double>& ts) {
    if (ts.empty()) throw ContractViolation("profile: empty t grid");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] >= 0.0) || !std::isfinite(ts[i])) throw ContractViolation("profile: t values must be finite and >= 0");
        if (i > 0 && !(ts[i] > ts[i - 1])) throw ContractViolation("profile: t grid must be strictly increasing");
    }
}

struct Lattice {
    int n = 0;
    double h = 0.0;
    std::array<long, kMaxDim> k0{};
    std::array<long, kMaxDim> count{};
    double cells = 1.0;

    Coords center(const std::array<long, kMaxDim>& idx) const {
        Coords c{};
        for (int i = 0; i < n; ++i) c[i] = (static_cast<double>(k0[i] + idx[i]) + 0.5) * h;
        return c;
    }
};

Lattice make_lattice(const Scene& scene, const StructuringBody& body, double h, double reach) {
    const int n = scene.dim;
    const auto [alo, ahi] = scene.bounding_box();
    const auto [blo, bhi] = body.bounding_box();
    const double pad = 2.0 * h + h * std::sqrt(static_cast<double>(n));
    Lattice L;
    L.n = n;
    L.h = h;
    for (int i = 0; i < n; ++i) {
        const double lo = alo[i] + reach * std::min(blo[i], 0.0) - pad;
        const double hi = ahi[i] + reach * std::max(bhi[i], 0.0) + pad;
        L.k0[i] = static_cast<long>(std::floor(lo / h - 0.5));
        const long k1 = static_cast<long>(std::ceil(hi / h - 0.5));
        L.count[i] = k1 - L.k0[i] + 1;
        L.cells *= static_cast<double>(L.count[i]);
    }
    for (int i = n; i < kMaxDim; ++i) L.count[i] = 1;
    return L;
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(6);
    ss << x;
    return ss.str();
}

// Histogram of distances against sorted breakpoints: le[k] = #{d <= b_k}, lt[k] = #{d < b_k}
// once prefix-summed.
struct Histogram {
    std::vector<double> b;
    std::vector<long long> le, lt;
    explicit Histogram(std::vector<double> breaks) : b(std::move(breaks)), le(b.size() + 1, 0), lt(b.size() + 1, 0) {}
    void add(double d) {
        if (d > b.back()) return;
        le[std::lower_bound(b.begin(), b.end(), d) - b.begin()]++;
        lt[std::upper_bound(b.begin(), b.end(), d) - b.begin()]++;
    }
    void merge(const Histogram& o) {
        for (std::size_t k = 0; k < le.size(); ++k) le[k] += o.le[k], lt[k] += o.lt[k];
    }
    void finish() {
        for (std::size_t k = 1; k < le.size(); ++k) le[k] += le[k - 1], lt[k] += lt[k - 1];
    }
    long long count_le(double x) const { return le[std::lower_bound(b.begin(), b.end(), x) - b.begin()]; }
    long long count_lt(double x) const { return lt[std::lower_bound(b.begin(), b.end(), x) - b.begin()]; }
};

// One-dimensional squared distance transform (lower envelope of parabolas), unit spacing.
void edt_1d(const double* f, double* d, long n, std::vector<long>& v, std::vector<double>& z) {
    v.assign(n, 0);
    z.assign(n + 1, 0.0);
    long k = 0;
    long first = -1;
    for (long q = 0; q < n; ++q)
        if (std::isfinite(f[q])) {
            first = q;
            break;
        }
    if (first < 0) {
        for (long q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    for (long q = first + 1; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        double s;
        while (true) {
            const long p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
            if (s <= z[k] && k > 0) --k;
            else break;
        }
        if (s <= z[k]) {
            v[k] = q;
            z[k + 1] = kInf;
        } else {
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
        }
    }
    k = 0;
    for (long q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = static_cast<double>(q - v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

std::vector<double> edt_distances(const Scene& scene, const Lattice& L, double* seed_max) {
    const int n = L.n;
    const long total = static_cast<long>(L.cells);
    std::array<long, kMaxDim> stride{};
    stride[n - 1] = 1;
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * L.count[i + 1];

    std::vector<double> f(total, kInf);
    const double rs = 0.5 * L.h * std::sqrt(static_cast<double>(n));
    *seed_max = rs;
    // Seed cells: centers within half a cell diagonal of A, holding their exact distance.
    for (const auto& prim : scene.primitives) {
        const auto [lo, hi] = primitive_bounding_box(prim, n);
        std::array<long, kMaxDim> a{}, b{};
        for (int i = 0; i < n; ++i) {
            a[i] = std::max<long>(0, static_cast<long>(std::floor((lo[i] - rs) / L.h - 0.5)) - L.k0[i]);
            b[i] = std::min<long>(L.count[i] - 1, static_cast<long>(std::ceil((hi[i] + rs) / L.h - 0.5)) - L.k0[i]);
        }
        std::array<long, kMaxDim> idx = a;
        while (true) {
            long off = 0;
            for (int i = 0; i < n; ++i) off += idx[i] * stride[i];
            const double d = euclidean_distance(L.center(idx), prim, n);
            if (d <= rs) f[off] = std::min(f[off], d * d / (L.h * L.h));
            int ax = n - 1;
            while (ax >= 0 && ++idx[ax] > b[ax]) idx[ax] = a[ax], --ax;
            if (ax < 0) break;
        }
    }
    // Separable passes along each axis.
    std::vector<double> out(total);
    for (int ax = 0; ax < n; ++ax) {
        const long len = L.count[ax];
        const long lines = total / len;
        detail::parallel_ranges(0, lines, [&](int, long lo, long hi) {
            std::vector<double> in(len), res(len), z;
            std::vector<long> v;
            for (long line = lo; line < hi; ++line) {
                // Decompose the line index into the coordinates of the other axes.
                long rem = line, base = 0;
                for (int i = n - 1; i >= 0; --i) {
                    if (i == ax) continue;
                    base += (rem % L.count[i]) * stride[i];
                    rem /= L.count[i];
                }
                for (long q = 0; q < len; ++q) in[q] = f[base + q * stride[ax]];
                edt_1d(in.data(), res.data(), len, v, z);
                for (long q = 0; q < len; ++q) out[base + q * stride[ax]] = res[q];
            }
        });
        f.swap(out);
    }
    for (auto& x : f) x = std::sqrt(x) * L.h;
    return f;
}

}  // namespace

std::string Method::tag() const {
    switch (kind) {
        case MethodKind::exact:
            return detail.empty() ? "exact" : "exact(" + detail + ")";
        case MethodKind::grid:
            return "grid(h=" + fmt(h) + (detail.empty() ? "" : "," + detail) + ")";
        case MethodKind::montecarlo:
            return "montecarlo(samples=" + std::to_string(samples) + ",seed=" + std::to_string(seed) + ")";
    }
    return "unknown";
}

int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("PARVOL_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return std::min(cap, hw);
    }
    return hw;
}

VolumeProfile grid_volume(const Scene& scene, const StructuringBody& body, double h, const std::vector<double>& ts) {
    if (!(h > 0.0)) throw ContractViolation("grid_volume: h must be positive");
    if (scene.dim != body.dim) throw ContractViolation("grid_volume: scene and body dimensions differ");
    check_ts(ts);
    const int n = scene.dim;
    const Gauge gauge(body);
    const double w = h * std::sqrt(static_cast<double>(n));
    const double tmax = ts.back();

    const Lattice L = make_lattice(scene, body, h, tmax);
    if (L.cells > kCellBudget) {
        const double need = h * std::pow(L.cells / kCellBudget, 1.0 / n) * 1.05;
        throw ResourceError("grid_volume: " + fmt(L.cells) + " cells exceed the 2^31 budget; use h >= " + fmt(need));
    }

    std::vector<double> breaks;
    for (double t : ts) breaks.insert(breaks.end(), {t - w, t, t + w});
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    VolumeProfile out;
    out.n = n;
    out.body_volume = body.volume();
    out.method.kind = MethodKind::grid;
    out.method.h = h;

    Histogram total(breaks);
    const bool use_edt =
        scene.primitives.size() > kDirectPrimitiveLimit && gauge.is_euclidean() && L.cells <= kEdtCellBudget;
    if (use_edt) {
        out.method.detail = "edt";
        double rs = 0.0;
        const auto d = edt_distances(scene, L, &rs);
        const double scale = 1.0 / gauge.norm(Coords{1.0, 0.0, 0.0, 0.0});
        for (double x : d) total.add(x / scale);
    } else {
        const int workers = thread_count();
        std::vector<Histogram> partial(workers, Histogram(breaks));
        long inner = 1;
        for (int i = 1; i < n; ++i) inner *= L.count[i];
        detail::parallel_ranges(0, L.count[0], [&](int wk, long lo, long hi) {
            Histogram& hist = partial[wk];
            std::array<long, kMaxDim> idx{};
            for (long i0 = lo; i0 < hi; ++i0) {
                for (long r = 0; r < inner; ++r) {
                    idx[0] = i0;
                    long rem = r;
                    for (int i = n - 1; i >= 1; --i) idx[i] = rem % L.count[i], rem /= L.count[i];
                    hist.add(gauge.distance(L.center(idx), scene));
                }
            }
        });
        for (const auto& p : partial) total.merge(p);
    }
    total.finish();

    const double cell = std::pow(h, n);
    for (double t : ts) {
        out.t.push_back(t);
        out.V.push_back(cell * static_cast<double>(total.count_le(t)));
        out.band.push_back(cell * static_cast<double>(total.count_le(t + w) - total.count_lt(t - w)));
    }
    return out;
}

MonteCarloEstimate montecarlo_volume(const Scene& scene, const StructuringBody& body, double t, std::int64_t samples,
                                     std::uint64_t seed) {
    if (samples < 1000) throw ContractViolation("montecarlo_volume: at least 1000 samples are required");
    if (!(t >= 0.0)) throw ContractViolation("montecarlo_volume: t must be >= 0");
    if (scene.dim != body.dim) throw ContractViolation("montecarlo_volume: scene and body dimensions differ");
    const int n = scene.dim;
    const Gauge gauge(body);
    const auto [alo, ahi] = scene.bounding_box();
    const auto [blo, bhi] = body.bounding_box();
    Coords lo{}, span{};
    double box = 1.0;
    for (int i = 0; i < n; ++i) {
        lo[i] = alo[i] + t * std::min(blo[i], 0.0);
        span[i] = ahi[i] + t * std::max(bhi[i], 0.0) - lo[i];
        box *= span[i];
    }

    constexpr std::int64_t chunk = 1 << 16;
    const std::int64_t chunks = (samples + chunk - 1) / chunk;
    const int workers = thread_count();
    std::vector<std::int64_t> hits(workers, 0);
    detail::parallel_ranges(0, static_cast<long>(chunks), [&](int wk, long c0, long c1) {
        for (long c = c0; c < c1; ++c) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) >> 32)};
            std::mt19937_64 rng(seq);
            const std::int64_t m = std::min<std::int64_t>(chunk, samples - c * chunk);
            for (std::int64_t s = 0; s < m; ++s) {
                Coords x{};
                for (int i = 0; i < n; ++i) x[i] = lo[i] + span[i] * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
                if (gauge.distance(x, scene) <= t) hits[wk]++;
            }
        }
    });
    std::int64_t total = 0;
    for (auto hcount : hits) total += hcount;
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    MonteCarloEstimate e;
    e.value = p * box;
    e.half_width = 2.58 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) * box;
    e.samples = samples;
    e.seed = seed;
    return e;
}

namespace {

bool euclidean_radius(const StructuringBody& body, double* rho) {
    if (const auto* b = std::get_if<EuclideanBall>(&body.shape)) {
        *rho = b->radius;
        return true;
    }
    return false;
}

std::optional<IntervalUnion> as_intervals_1d(const Scene& scene) {
    std::vector<std::pair<double, double>> raw;
    for (const auto& prim : scene.primitives) {
        if (const auto* p = std::get_if<PointPrim>(&prim.shape)) raw.emplace_back(p->p[0], p->p[0]);
        else if (const auto* s = std::get_if<SegmentPrim>(&prim.shape))
            raw.emplace_back(std::min(s->a[0], s->b[0]), std::max(s->a[0], s->b[0]));
        else if (const auto* b = std::get_if<BoxPrim>(&prim.shape))
            raw.emplace_back(b->center[0] - b->half[0], b->center[0] + b->half[0]);
        else if (const auto* ball = std::get_if<BallPrim>(&prim.shape))
            raw.emplace_back(ball->center[0] - ball->radius, ball->center[0] + ball->radius);
        else
            return std::nullopt;
    }
    return IntervalUnion::from(std::move(raw));
}

IntervalUnion body_intervals(const StructuringBody& body) {
    if (const auto* iv = std::get_if<IntervalBody>(&body.shape)) return IntervalUnion::from(iv->intervals);
    if (const auto* b = std::get_if<EuclideanBall>(&body.shape)) return IntervalUnion::from({{-b->radius, b->radius}});
    throw ContractViolation("profile: unsupported 1D structuring body");
}

bool planar_disks(const Scene& scene, const StructuringBody& body) {
    double rho = 0.0;
    if (scene.dim != 2 || !euclidean_radius(body, &rho)) return false;
    for (const auto& p : scene.primitives)
        if (!std::holds_alternative<PointPrim>(p.shape) && !std::holds_alternative<BallPrim>(p.shape)) return false;
    return true;
}

// Steiner polynomial of the single convex primitive, if it has one.
std::optional<SteinerPolynomial> single_convex_steiner(const Scene& scene) {
    if (scene.primitives.size() != 1) return std::nullopt;
    const Primitive& prim = scene.primitives[0];
    const int n = scene.dim;
    if (const auto* b = std::get_if<BallPrim>(&prim.shape)) {
        // (r + t)^n |B_2^n| expanded.
        SteinerPolynomial s{n, std::vector<double>(n + 1)};
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            s.c[k] = unit_ball_volume(n) * binom * std::pow(b->radius, n - k);
            binom = binom * (n - k) / (k + 1);
        }
        return s;
    }
    if (const auto* poly = std::get_if<PolygonPrim>(&prim.shape); poly && !poly->convex) return std::nullopt;
    if (const auto* prod = std::get_if<ProductPrim>(&prim.shape)) {
        if (const auto* poly = std::get_if<PolygonPrim>(&prod->base->shape); poly && !poly->convex) return std::nullopt;
    }
    const auto pts = extreme_points(prim, n);
    if (n == 2) {
        if (affine_dimension(pts, 2) == 2) return steiner_polynomial_2d(convex_hull(pts, 2).ring());
        std::vector<Vec2> v;
        for (const auto& p : pts) v.push_back(to_vec2(p));
        return steiner_polynomial_2d(v);
    }
    if (n == 3) {
        std::vector<Vec3> v;
        for (const auto& p : pts) v.push_back(to_vec3(p));
        return steiner_polynomial_3d(v);
    }
    return std::nullopt;
}

}  // namespace

bool has_exact_method(const Scene& scene, const StructuringBody& body) {
    if (scene.dim != body.dim) return false;
    if (scene.dim == 1) return as_intervals_1d(scene).has_value() && !std::holds_alternative<PolytopeBody>(body.shape);
    if (planar_disks(scene, body)) return true;
    double rho = 0.0;
    return euclidean_radius(body, &rho) && single_convex_steiner(scene).has_value();
}

VolumeProfile profile(const Scene& scene, const StructuringBody& body, const std::vector<double>& ts,
                      const ProfileOptions& options) {
    check_ts(ts);
    if (scene.dim != body.dim) throw ContractViolation("profile: scene and body dimensions differ");
    const bool want_exact = options.method == ProfileMethod::exact ||
                            (options.method == ProfileMethod::automatic && has_exact_method(scene, body));
    if (options.method == ProfileMethod::exact && !has_exact_method(scene, body))
        throw ContractViolation("profile: no exact method for this scene and body");

    if (want_exact) {
        VolumeProfile out;
        out.n = scene.dim;
        out.body_volume = body.volume();
        out.method.kind = MethodKind::exact;
        out.t = ts;
        out.band.assign(ts.size(), 0.0);
        if (scene.dim == 1) {
            out.method.detail = "intervals";
            const auto pw = parallel_profile_1d(*as_intervals_1d(scene), body_intervals(body), std::max(ts.back(), 1e-12));
            for (double t : ts) out.V.push_back(pw.value(t)), out.dV.push_back(pw.slope_at(t));
            return out;
        }
        double rho = 0.0;
        euclidean_radius(body, &rho);
        if (planar_disks(scene, body)) {
            out.method.detail = "disk-union";
            for (double t : ts) {
                std::vector<Disk> disks;
                for (const auto& p : scene.primitives) {
                    if (const auto* pt = std::get_if<PointPrim>(&p.shape)) disks.push_back({to_vec2(pt->p), rho * t});
                    else {
                        const auto& b = std::get<BallPrim>(p.shape);
                        disks.push_back({to_vec2(b.center), b.radius + rho * t});
                    }
                }
                const auto m = disk_union_measure(disks);
                out.V.push_back(m.area);
                out.dV.push_back(rho * m.perimeter);
            }
            return out;
        }
        out.method.detail = "steiner";
        const auto s = *single_convex_steiner(scene);
        for (double t : ts) out.V.push_back(s(rho * t)), out.dV.push_back(rho * s.derivative(rho * t));
        return out;
    }

    if (options.method == ProfileMethod::montecarlo) {
        VolumeProfile out;
        out.n = scene.dim;
        out.body_volume = body.volume();
        out.method = {MethodKind::montecarlo, 0.0, options.samples, options.seed, ""};
        for (double t : ts) {
            const auto e = montecarlo_volume(scene, body, t, options.samples, options.seed);
            out.t.push_back(t);
            out.V.push_back(e.value);
            out.band.push_back(e.half_width);
        }
        return out;
    }
    return grid_volume(scene, body, options.h, ts);
}

}  // namespace parvol
