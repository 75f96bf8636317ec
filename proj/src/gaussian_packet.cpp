#include "qlens/gaussian_packet.hpp"

#include <cmath>
#include <numbers>

#include "qlens/errors.hpp"
#include "qlens/observables.hpp"

namespace qlens {

void PacketParams::validate() const {
  if (!(sigma0 > 0.0)) throw InvalidArgument("packet: sigma0 must be positive");
  if (!(v > 0.0)) throw InvalidArgument("packet: v must be positive");
  if (!(q_launch < 0.0)) throw InvalidArgument("packet: q_launch must be negative");
  if (!(m > 0.0) || !(hbar > 0.0)) throw InvalidArgument("packet: m and hbar must be positive");
}

double sigma_from_rho(const PacketParams& p, cplx rho) {
  const double im_inv = (1.0 / rho).imag();
  if (!(im_inv > 0.0)) throw NonNormalizableState("sigma_from_rho: Im(1/rho) must be positive");
  return 1.0 / std::sqrt(p.wavenumber() * im_inv);
}

cplx rho_from_sigma(const PacketParams& p, double sigma) {
  return {0.0, -p.wavenumber() * sigma * sigma};
}

namespace {

cplx gaussian_factor(const PacketParams& p, double z, cplx rho, double carrier) {
  const double sigma = sigma_from_rho(p, rho);
  const double amp = std::pow(std::numbers::pi * sigma * sigma, -0.25);
  const cplx i{0.0, 1.0};
  return amp * std::exp(i * p.wavenumber() * (z * z / (2.0 * rho) + carrier * z));
}

}  // namespace

cplx packet_factor_longitudinal(const PacketParams& p, double z, cplx rho) {
  return gaussian_factor(p, z, rho, 1.0);
}

cplx packet_factor_transverse(const PacketParams& p, double z, cplx rho) {
  return gaussian_factor(p, z, rho, 0.0);
}

ComplexField2D synthesize_packet(const GaussianPotential& pot, const PacketParams& p,
                                 const GridSpec& grid) {
  p.validate();
  grid.validate();
  const Vec2 e1 = pot.e1();
  const Vec2 e2 = pot.e2();
  // Carrier plus six bandwidths must fit under the cutoff along the axis of
  // propagation (projected onto both grid axes).
  const double kneed = p.wavenumber() + 6.0 / p.sigma0;
  if (std::abs(e1.x) * kneed > grid.k1_max() || std::abs(e1.y) * kneed > grid.k2_max()) {
    throw ConfigurationError("synthesize_packet: grid spacing does not resolve the carrier");
  }

  ComplexField2D field(grid);
  const cplx rho1 = p.rho1();
  const cplx rho2 = p.rho2();
  for (std::size_t j = 0; j < grid.n2; ++j) {
    for (std::size_t i = 0; i < grid.n1; ++i) {
      const Vec2 q{grid.x1(i), grid.x2(j)};
      const double z1 = dot(q, e1) - p.q_launch;
      const double z2 = dot(q, e2);
      field(i, j) = packet_factor_longitudinal(p, z1, rho1) * packet_factor_transverse(p, z2, rho2);
    }
  }
  const double n2 = field.norm_squared();
  field.scale(1.0 / std::sqrt(n2));

  const double edge = edge_mass(field);
  if (edge > 1e-12) {
    throw ConfigurationError("synthesize_packet: grid too small, boundary mass " +
                             std::to_string(edge));
  }
  return field;
}

}  // namespace qlens
