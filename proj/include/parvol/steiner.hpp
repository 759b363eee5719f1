#pragma once

#include <span>
#include <vector>

#include "parvol/geom_core.hpp"

namespace parvol {

/// |K + tB_2^n| = sum_k c[k] t^k for convex K.
struct SteinerPolynomial {
    int n = 0;
    std::vector<double> c;

    double operator()(double t) const;
    double derivative(double t, int order = 1) const;
};

/// Counter-clockwise ring of a convex vertex cycle with collinear vertices removed.
/// Degenerate input yields a 1- or 2-vertex ring. Throws ContractViolation when the
/// cycle is not convex.
std::vector<Vec2> convex_ring(std::span<const Vec2> cycle);

/// Coefficients (area, perimeter, pi) of a convex polygon given as a vertex cycle.
SteinerPolynomial steiner_polynomial_2d(std::span<const Vec2> convex_cycle);
SteinerPolynomial steiner_polynomial_disk(double radius);

/// Coefficients (volume, surface, mean-width term, 4 pi / 3) of conv(points); handles
/// points spanning affine dimension 0 through 3.
SteinerPolynomial steiner_polynomial_3d(std::span<const Vec3> points);
SteinerPolynomial steiner_polynomial_3d(const ConvexPolytope& k);

struct CounterexamplePolynomial {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    /// (n/(n-1)) a0 V''(0) - a1^2 with V''(0) = 2 a2; positive means V^{1/n} is strictly
    /// convex at 0.
    double determinant = 0.0;
    bool nonconcave_at_zero = false;
};

/// Low-order coefficients of |A + tB_2^n| for A = ([-1,1]^3 u [e1, l e1]) x [-1,1]^{n-3}.
/// Throws std::domain_error when l < 2 or n < 3.
CounterexamplePolynomial counterexample_polynomial_3d(double l, int n);

/// Counter-clockwise vertices of P + Q for convex P and Q, by merging edge directions.
std::vector<Vec2> minkowski_sum_convex(std::span<const Vec2> p, std::span<const Vec2> q);

/// Mixed area V(P, Q), with 2V(P,Q) = |P+Q| - |P| - |Q|.
double mixed_area(std::span<const Vec2> p, std::span<const Vec2> q);
/// Mixed area of P with the disk of the given radius: r per(P) / 2.
double mixed_area_disk(std::span<const Vec2> p, double radius);

double polygon_area(std::span<const Vec2> ring);
double polygon_perimeter(std::span<const Vec2> ring);

}  // namespace parvol
