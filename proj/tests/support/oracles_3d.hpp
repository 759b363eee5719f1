#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "parvol/vec.hpp"

namespace testsupport {

inline int nearest_site(std::span<const parvol::Vec3> sites, parvol::Vec3 x) {
    int best = 0;
    double bd = 1e300;
    for (std::size_t j = 0; j < sites.size(); ++j) {
        const double d = parvol::norm(x - sites[j]);
        if (d < bd) bd = d, best = static_cast<int>(j);
    }
    return best;
}

/// Farthest point of the Voronoi cell of `site` from the site, by brute-force grid search
/// over a cube of half-width `reach`, refined three times around the running maximum.
inline double cell_radius_oracle(std::span<const parvol::Vec3> sites, int site, double reach, double h) {
    const parvol::Vec3 s = sites[site];
    parvol::Vec3 center = s, arg = s;
    double best = 0.0, half = reach;
    for (int level = 0; level < 4; ++level) {
        const long k = static_cast<long>(std::ceil(half / h));
        for (long i = -k; i <= k; ++i)
            for (long j = -k; j <= k; ++j)
                for (long l = -k; l <= k; ++l) {
                    const parvol::Vec3 x = center + parvol::Vec3{i * h, j * h, l * h};
                    const double d = parvol::norm(x - s);
                    if (d <= best) continue;
                    if (nearest_site(sites, x) != site) continue;
                    best = d;
                    arg = x;
                }
        center = arg;
        half = 4 * h;
        h /= 8;
    }
    return best;
}

}  // namespace testsupport
