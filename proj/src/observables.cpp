#include "qlens/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qlens/errors.hpp"
#include "qlens/simd/kernels.hpp"

namespace qlens {

namespace {

double checked_norm_sq(const ComplexField2D& field) {
  const double n = field.norm_squared();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NonNormalizableState("observable: field norm is zero or not finite");
  }
  return n;
}

}  // namespace

double sigma2(const ComplexField2D& field, Vec2 e2) {
  const GridSpec& g = field.grid();
  const double total = checked_norm_sq(field);
  const auto& k = simd::kernels();
  double acc = 0.0;
  if (e2.x == 0.0) {
    for (std::size_t j = 0; j < g.n2; ++j) {
      const double z = g.x2(j) * e2.y;
      acc += z * z * k.norm_sq(field.data() + j * g.n1, g.n1);
    }
  } else {
    for (std::size_t j = 0; j < g.n2; ++j) {
      for (std::size_t i = 0; i < g.n1; ++i) {
        const double z = dot({g.x1(i), g.x2(j)}, e2);
        acc += z * z * std::norm(field(i, j));
      }
    }
  }
  return std::sqrt(2.0 * acc * g.cell_area() / total);
}

double sigma2_free(const PacketParams& p, double t) {
  // Same as sqrt(sigma0^2 + (hbar t/(m sigma0))^2), but through the radius
  // so the lens model without an island reproduces it bit for bit.
  return sigma_from_rho(p, p.rho2() + p.v * t);
}

Vec2 mean_position(const ComplexField2D& field) {
  const GridSpec& g = field.grid();
  const double total = checked_norm_sq(field);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < g.n2; ++j) {
    double row = 0.0, row_x1 = 0.0;
    for (std::size_t i = 0; i < g.n1; ++i) {
      const double w = std::norm(field(i, j));
      row += w;
      row_x1 += w * g.x1(i);
    }
    m1 += row_x1;
    m2 += row * g.x2(j);
  }
  const double a = g.cell_area();
  return {m1 * a / total, m2 * a / total};
}

double edge_mass(const ComplexField2D& field, std::size_t band) {
  const GridSpec& g = field.grid();
  band = std::min(band, std::min(g.n1, g.n2) / 2);
  const auto& k = simd::kernels();
  double acc = 0.0;
  for (std::size_t j = 0; j < g.n2; ++j) {
    const cplx* row = field.data() + j * g.n1;
    if (j < band || j + band >= g.n2) {
      acc += k.norm_sq(row, g.n1);
    } else {
      acc += k.norm_sq(row, band) + k.norm_sq(row + g.n1 - band, band);
    }
  }
  return acc * g.cell_area();
}

}  // namespace qlens
