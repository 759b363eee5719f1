#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parvol::detail {

// Shift the payoffs positive, then solve max sum(y) s.t. M' y <= 1, y >= 0 with a dense
// tableau simplex under Bland's rule. The origin is feasible, so a single phase suffices.
double minimax_value(const std::vector<double>& m, int rows, int cols) {
    if (rows <= 0 || cols <= 0 || static_cast<int>(m.size()) != rows * cols)
        throw std::invalid_argument("minimax_value: bad matrix shape");

    const double lo = *std::min_element(m.begin(), m.end());
    const double hi = *std::max_element(m.begin(), m.end());
    const double shift = 1.0 - lo + 1e-3 * (hi - lo);

    const int width = cols + rows + 1;
    std::vector<double> tab(static_cast<std::size_t>(rows + 1) * width, 0.0);
    auto at = [&](int r, int c) -> double& { return tab[static_cast<std::size_t>(r) * width + c]; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) at(r, c) = m[static_cast<std::size_t>(r) * cols + c] + shift;
        at(r, cols + r) = 1.0;
        at(r, width - 1) = 1.0;
    }
    for (int c = 0; c < cols; ++c) at(rows, c) = -1.0;

    std::vector<int> basis(rows);
    for (int r = 0; r < rows; ++r) basis[r] = cols + r;

    constexpr double eps = 1e-13;
    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int c = 0; c < width - 1; ++c) {
            if (at(rows, c) < -eps) {
                enter = c;
                break;
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < rows; ++r) {
            const double a = at(r, enter);
            if (a <= eps) continue;
            const double ratio = at(r, width - 1) / a;
            if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave < 0) throw std::runtime_error("minimax_value: unbounded program");

        const double piv = at(leave, enter);
        for (int c = 0; c < width; ++c) at(leave, c) /= piv;
        for (int r = 0; r <= rows; ++r) {
            if (r == leave) continue;
            const double f = at(r, enter);
            if (f == 0.0) continue;
            for (int c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
        }
        basis[leave] = enter;
    }

    const double total = at(rows, width - 1);
    return 1.0 / total - shift;
}

}  // namespace parvol::detail
