#pragma once

#include <optional>

#include "qlens/gaussian_packet.hpp"
#include "qlens/linalg.hpp"
#include "qlens/potential.hpp"

namespace qlens::lens {

/// Pass threshold applied to every validity ratio.
inline constexpr double kValidityThreshold = 0.2;

/// Free propagator sqrt(m/(2 pi i hbar tau)) exp(i m (z-z')^2 / (2 hbar tau)).
/// Throws InvalidArgument for tau <= 0.
cplx k0(double z, double zp, double tau, double m = 1.0, double hbar = 1.0);

/// tau^2 |V0| l1 / (m l2^2 L): smallness parameter of the transverse
/// expansion.
double transit_ratio(const GaussianPotential& pot, double L, double tau, double m = 1.0);

/// sqrt(pi)/4 (l1/L) V0 tau^2 / (m l2^2), the correction inside the
/// square root of the transverse kernel.
double kernel_correction(const GaussianPotential& pot, double L, double tau, double m = 1.0);

/// Coefficient beta of the instantaneous kick exp(i beta zeta^2).
/// `exact` keeps the (1 - correction)^(-1) factor that makes the
/// three-factor representation identical to kv.
double kick_coefficient(const GaussianPotential& pot, double L, double tau, double m = 1.0,
                        double hbar = 1.0, bool exact = false);

/// Transverse far-field kernel. Throws ValidityDomainError carrying
/// transit_ratio when it exceeds kValidityThreshold.
cplx kv(double z, double zp, double tau, const GaussianPotential& pot, double L, double m = 1.0,
        double hbar = 1.0);

/// f = (1/sqrt(pi)) (E0/V0) (l2^2 / l1); empty for V0 == 0 (no lens).
std::optional<double> focal_length(const GaussianPotential& pot, double kinetic_energy);

/// 1/rho+ = 1/rho- + 1/f. Throws PoleError when rho- == -f and
/// InvalidArgument when rho- == 0.
cplx apply_lens(cplx rho_minus, std::optional<double> f);

/// Snapshot of the analytic evolution at time t.
struct LensState {
  double t = 0.0;
  double t_cross = 0.0;         // |Q| / v
  double L = 0.0;               // |Q|, source-island distance
  std::optional<double> f;      // focal length, empty when V0 == 0
  cplx rho1 = {};               // rho1 + v t
  cplx rho_minus = {};          // rho2 + |Q| (post-crossing only)
  cplx rho_plus = {};           // lensed radius (post-crossing only)
  cplx rho2_eff = {};           // rho'_2
  double phi1 = 0.0;
  double phi2 = 0.0;
  bool crossed = false;
};

LensState lens_state(const PacketParams& p, const GaussianPotential& pot, double t);

/// rho'_2(t): free flight before |Q|/v, lens at the crossing, free flight
/// after. Throws InvalidArgument for t < 0.
cplx evolve_rho(const PacketParams& p, const GaussianPotential& pot, double t);

/// sigma(rho'_2(t)).
double predict_sigma2(const PacketParams& p, const GaussianPotential& pot, double t);
/// predict_sigma2 - sigma2_free.
double predict_delta_sigma2(const PacketParams& p, const GaussianPotential& pot, double t);

struct RatioCheck {
  double value = 0.0;
  bool pass = true;
};

struct ValidityReport {
  RatioCheck transit;     // t^2 |V0| l1 / (m l2^2 L)
  RatioCheck transverse;  // sigma0 / l2
  RatioCheck island;      // l1 / L
  RatioCheck packet;      // sigma0 / L
  bool all_pass() const { return transit.pass && transverse.pass && island.pass && packet.pass; }
};

ValidityReport check_validity(const PacketParams& p, const GaussianPotential& pot, double L,
                              double t);

}  // namespace qlens::lens
