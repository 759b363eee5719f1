#pragma once

#include <optional>
#include <span>
#include <vector>

#include "parvol/diagnostics.hpp"
#include "parvol/vec.hpp"

namespace parvol {

struct StarViolation {
    int facet = 0;
    int a = 0;  // edge [a, b] of the facet, indices into the input points
    int b = 0;
    int c = 0;  // facet vertex seeing the edge at a non-acute angle
    double cosine = 0.0;
    bool borderline = false;  // |cosine| <= 1e-9
};

struct StarCheck {
    bool pass = true;
    std::optional<StarViolation> first;
};

/// Every hull facet vertex must see every facet edge at a strictly acute angle. Throws
/// DegeneracyError when the points do not span R^3.
StarCheck condition_star_check(std::span<const Vec3> points);

struct VoronoiCell {
    int site = 0;
    std::vector<int> neighbors;  // sites whose bisector plane carries a face of the cell
    std::vector<Vec3> vertices;  // includes bounding-box corners for unbounded cells
    bool bounded = false;
    double containment_radius = 0.0;  // max |v - site| over vertices; +inf when unbounded
};

struct VoronoiThreshold {
    double t0 = 0.0;
    double diameter = 0.0;
    std::vector<VoronoiCell> cells;
};

/// Voronoi cells as bisector half-space intersections clipped to a box 100 diam wide;
/// t0 = max(diam, largest containment radius of a bounded cell).
VoronoiThreshold voronoi_t0(std::span<const Vec3> points);

/// Grid profile of the point set on [t0, T] and its 1/3-concavity report. Throws
/// ContractViolation when the star condition fails unless `exploratory` is set.
ConcavityReport star_concavity_verify(std::span<const Vec3> points, double t0, double T, double h = 0.1,
                                      int steps = 21, bool exploratory = false);

}  // namespace parvol
