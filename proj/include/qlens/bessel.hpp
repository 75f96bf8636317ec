#pragma once

#include <vector>

namespace qlens {

/// J_0(x) .. J_{max_order}(x) for x >= 0 by Miller's backward recurrence,
/// normalized with J_0 + 2 sum J_{2k} = 1. Accurate in the decaying tail
/// k > x, which is where the Chebyshev truncation is decided.
std::vector<double> bessel_j_sequence(double x, int max_order);

}  // namespace qlens
