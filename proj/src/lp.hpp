#pragma once

#include <vector>

namespace parvol::detail {

/// Value of the zero-sum matrix game min over column mixtures lambda of
/// max_k (M lambda)_k. M is row-major with `rows` x `cols` entries.
double minimax_value(const std::vector<double>& m, int rows, int cols);

}  // namespace parvol::detail
