#pragma once

#include "qlens/grid.hpp"
#include "qlens/linalg.hpp"
#include "qlens/potential.hpp"

namespace qlens {

/// Launch parameters of the product packet
///   psi1(q.e1 - Q; rho1) psi2(q.e2; rho2)
/// with rho1 = rho2 = -i (m v / hbar) sigma0^2.
struct PacketParams {
  double sigma0 = 0.1;
  double v = 60.0;
  double q_launch = -0.8;  // Q, along e1, must be negative
  double m = 1.0;
  double hbar = 1.0;

  /// m v / hbar
  double wavenumber() const { return m * v / hbar; }
  double kinetic_energy() const { return 0.5 * m * v * v; }
  cplx initial_rho() const { return {0.0, -wavenumber() * sigma0 * sigma0}; }
  cplx rho1() const { return initial_rho(); }
  cplx rho2() const { return initial_rho(); }
  /// |Q| / v, time for the centre to reach the island.
  double crossing_time() const { return std::abs(q_launch) / v; }

  void validate() const;
};

/// sigma = [ (m v / hbar) Im(1/rho) ]^(-1/2). Throws NonNormalizableState
/// when Im(1/rho) <= 0.
double sigma_from_rho(const PacketParams& p, cplx rho);

/// Radius of curvature of a packet with real dispersion sigma (no chirp).
cplx rho_from_sigma(const PacketParams& p, double sigma);

/// psi^(1)(z; rho) = (1/(pi sigma^2))^(1/4) exp(i k (z^2/(2 rho) + z)), k = m v / hbar.
cplx packet_factor_longitudinal(const PacketParams& p, double z, cplx rho);
/// psi^(2)(z; rho), the same without the carrier.
cplx packet_factor_transverse(const PacketParams& p, double z, cplx rho);

/// Samples the initial packet on `grid` with the propagation axis along
/// pot.e1() and normalizes it on the grid. Throws ConfigurationError if the
/// grid misses the carrier bandwidth or leaks more than 1e-12 of the mass
/// onto its boundary rows/columns.
ComplexField2D synthesize_packet(const GaussianPotential& pot, const PacketParams& p,
                                 const GridSpec& grid);

}  // namespace qlens
