#pragma once

#include "qlens/gaussian_packet.hpp"
#include "qlens/grid.hpp"

namespace qlens {

/// sqrt(2 int (q.e2)^2 |psi|^2 dq) by midpoint quadrature on the grid,
/// renormalized by the discrete norm. Throws NonNormalizableState for a
/// zero or non-finite field.
double sigma2(const ComplexField2D& field, Vec2 e2 = {0.0, 1.0});

/// sqrt(sigma0^2 + (hbar t / (m sigma0))^2), evaluated as the width of the
/// freely advanced radius rho2 + v t.
double sigma2_free(const PacketParams& p, double t);

inline double delta_sigma2(double sigma2_value, double sigma2_free_value) {
  return sigma2_value - sigma2_free_value;
}

/// <q> of |psi|^2 (normalized).
Vec2 mean_position(const ComplexField2D& field);

/// Probability mass in the outermost `band` rows and columns on every side.
double edge_mass(const ComplexField2D& field, std::size_t band = 2);

}  // namespace qlens
