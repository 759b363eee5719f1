#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parvol/geom_core.hpp"

namespace parvol {

enum class MethodKind { exact, grid, montecarlo };

struct Method {
    MethodKind kind = MethodKind::exact;
    double h = 0.0;             // grid
    std::int64_t samples = 0;   // montecarlo
    std::uint64_t seed = 0;     // montecarlo
    std::string detail;         // which exact engine, or "edt" for the grid fallback

    std::string tag() const;
};

/// Sampled t -> |A + tB| with per-sample error bands (zero for exact methods).
struct VolumeProfile {
    std::vector<double> t;
    std::vector<double> V;
    std::vector<double> band;
    std::vector<double> dV;  // exact right derivative when available, else empty
    Method method;
    int n = 0;
    double body_volume = 0.0;

    std::size_t size() const { return t.size(); }
};

/// Worker threads used by data-parallel sweeps: PARVOL_THREADS if set, else hardware.
int thread_count();

/// Cell-count estimate of |A + tB| on the lattice with cell centers at (k + 1/2) h.
/// band = h^n * #{cells with |d_B - t| <= h sqrt(n)}. Throws ResourceError above 2^31 cells.
VolumeProfile grid_volume(const Scene& scene, const StructuringBody& body, double h, const std::vector<double>& ts);

struct MonteCarloEstimate {
    double value = 0.0;
    double half_width = 0.0;  // 99% confidence
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

MonteCarloEstimate montecarlo_volume(const Scene& scene, const StructuringBody& body, double t, std::int64_t samples,
                                     std::uint64_t seed);

enum class ProfileMethod { automatic, exact, grid, montecarlo };

struct ProfileOptions {
    ProfileMethod method = ProfileMethod::automatic;
    double h = 0.02;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

/// Routes the scene to the most exact engine available (1D intervals, planar disk
/// unions, single convex bodies) and falls back to the grid otherwise.
VolumeProfile profile(const Scene& scene, const StructuringBody& body, const std::vector<double>& ts,
                      const ProfileOptions& options = {});

/// True when profile() has an exact engine for the pair.
bool has_exact_method(const Scene& scene, const StructuringBody& body);

}  // namespace parvol
