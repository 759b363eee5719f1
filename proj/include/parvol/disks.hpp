#pragma once

#include <array>
#include <span>
#include <vector>

#include "parvol/vec.hpp"

namespace parvol {

struct Disk {
    Vec2 center;
    double radius = 0.0;
};

/// Maximal arc of circle `disk` lying on the boundary of the union, from angle `from`
/// to `to` counter-clockwise (to > from, to - from <= 2 pi).
struct BoundaryArc {
    int disk = 0;
    double from = 0.0;
    double to = 0.0;
};

/// Arcs of the union boundary. Disks inside another disk contribute nothing; among
/// identical disks only the lowest index contributes.
std::vector<BoundaryArc> boundary_arcs(std::span<const Disk> disks);

struct DiskUnionMeasure {
    double area = 0.0;
    double perimeter = 0.0;
};

/// Exact area and perimeter of a union of disks with arbitrary radii.
DiskUnionMeasure disk_union_measure(std::span<const Disk> disks);

double disk_union_area(std::span<const Vec2> centers, double t);
double disk_union_perimeter(std::span<const Vec2> centers, double t);

struct CriticalRadius {
    enum class Kind { pairwise, circumradius };
    double value = 0.0;
    Kind kind = Kind::pairwise;
    std::array<int, 3> sites{-1, -1, -1};
};

/// Half pairwise distances and circumradii of non-degenerate triples, sorted and
/// deduplicated within 1e-12.
std::vector<CriticalRadius> critical_radii(std::span<const Vec2> centers);

struct DiskUnionSummary {
    double t = 0.0;
    double area = 0.0;
    double perimeter = 0.0;
    int components = 0;  // p
    int holes = 0;       // q
    int euler() const { return components - holes; }
};

/// Throws AmbiguousTopology when t is within 1e-12 of a critical radius.
DiskUnionSummary euler_summary(std::span<const Vec2> centers, double t);
/// Same, evaluated at t(1 + 1e-9) when t sits on a critical radius.
DiskUnionSummary euler_summary_perturbed(std::span<const Vec2> centers, double t);

/// Delaunay triangulation as counter-clockwise index triples. Points on a common empty
/// circle are fan-triangulated; collinear input yields no triangles.
std::vector<std::array<int, 3>> delaunay_triangles(std::span<const Vec2> points);

/// Circumcenter and circumradius; radius is +inf for collinear triples.
std::pair<Vec2, double> circumcircle(Vec2 a, Vec2 b, Vec2 c);

}  // namespace parvol
