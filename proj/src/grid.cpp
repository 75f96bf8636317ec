#include "qlens/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qlens/errors.hpp"
#include "qlens/simd/kernels.hpp"

namespace qlens {

double GridSpec::wavenumber(std::size_t i, std::size_t n, double d) {
  const auto signed_i = static_cast<long long>(i);
  const auto signed_n = static_cast<long long>(n);
  const long long m = (signed_i < (signed_n + 1) / 2) ? signed_i : signed_i - signed_n;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * d);
}

double GridSpec::k1_max() const { return std::numbers::pi / d1(); }
double GridSpec::k2_max() const { return std::numbers::pi / d2(); }

void GridSpec::validate() const {
  if (n1 < 64 || n2 < 64 || !std::has_single_bit(n1) || !std::has_single_bit(n2)) {
    throw ConfigurationError("grid: n1 and n2 must be powers of two >= 64");
  }
  if (!(x1_max > x1_min) || !(x2_max > x2_min)) {
    throw ConfigurationError("grid: extents must satisfy min < max");
  }
}

ComplexField2D::ComplexField2D(const GridSpec& grid) : grid_(grid), values_(grid.size()) {}

double ComplexField2D::norm_squared() const {
  return simd::kernels().norm_sq(values_.data(), values_.size()) * grid_.cell_area();
}

double ComplexField2D::norm() const { return std::sqrt(norm_squared()); }

void ComplexField2D::scale(double s) {
  for (auto& v : values_) v *= s;
}

double l2_distance(const ComplexField2D& a, const ComplexField2D& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("l2_distance: grids differ");
  const auto& k = simd::kernels();
  return std::sqrt(k.diff_norm_sq(a.data(), b.data(), a.values().size()) * a.grid().cell_area());
}

}  // namespace qlens
