#include "qlens/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "qlens/errors.hpp"

namespace qlens {

std::vector<double> bessel_j_sequence(double x, int max_order) {
  if (!(x >= 0.0) || max_order < 0) throw InvalidArgument("bessel_j_sequence: bad arguments");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double top = std::max(static_cast<double>(max_order), x);
  int start = static_cast<int>(top + 30.0 + 10.0 * std::cbrt(top) + 4.0 * std::sqrt(top));
  start += start % 2;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = 2.0 * k / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (int m = k - 1; m <= start; ++m) j[m] *= 1e-250;
    }
  }
  double sum = j[0];
  for (int k = 2; k <= start; k += 2) sum += 2.0 * j[k];
  for (int k = 0; k <= max_order; ++k) out[k] = j[k] / sum;
  return out;
}

}  // namespace qlens
