#include "qlens/lens.hpp"

#include <cmath>
#include <numbers>

#include "qlens/errors.hpp"
#include "qlens/observables.hpp"

namespace qlens::lens {

namespace {

constexpr cplx kI{0.0, 1.0};

RatioCheck ratio(double value) { return {value, value <= kValidityThreshold}; }

}  // namespace

cplx k0(double z, double zp, double tau, double m, double hbar) {
  if (!(tau > 0.0)) throw InvalidArgument("k0: tau must be positive");
  const double dz = z - zp;
  const cplx pref = std::sqrt(cplx{m / (2.0 * std::numbers::pi * hbar * tau), 0.0} / kI);
  return pref * std::exp(kI * (m * dz * dz / (2.0 * hbar * tau)));
}

double transit_ratio(const GaussianPotential& pot, double L, double tau, double m) {
  return tau * tau * std::abs(pot.v0()) * pot.l1() / (m * pot.l2() * pot.l2() * L);
}

double kernel_correction(const GaussianPotential& pot, double L, double tau, double m) {
  return kSqrtPi / 4.0 * (pot.l1() / L) * pot.v0() * tau * tau /
         (m * pot.l2() * pot.l2());
}

double kick_coefficient(const GaussianPotential& pot, double L, double tau, double m, double hbar,
                        bool exact) {
  const double beta =
      kSqrtPi / 2.0 * (pot.l1() / L) * pot.v0() * tau / (hbar * pot.l2() * pot.l2());
  return exact ? beta / (1.0 - kernel_correction(pot, L, tau, m)) : beta;
}

cplx kv(double z, double zp, double tau, const GaussianPotential& pot, double L, double m,
        double hbar) {
  if (!(tau > 0.0)) throw InvalidArgument("kv: tau must be positive");
  if (!(L > 0.0)) throw InvalidArgument("kv: L must be positive");
  const double r = transit_ratio(pot, L, tau, m);
  if (r > kValidityThreshold) {
    throw ValidityDomainError("kv: transverse expansion outside its validity domain", r);
  }
  const double s = z + zp;
  const double phase = kSqrtPi / 8.0 * (pot.l1() / L) * pot.v0() * tau / hbar * s *
                       s / (pot.l2() * pot.l2());
  return k0(z, zp, tau, m, hbar) * std::sqrt(1.0 - kernel_correction(pot, L, tau, m)) *
         std::exp(kI * phase);
}

std::optional<double> focal_length(const GaussianPotential& pot, double kinetic_energy) {
  if (pot.v0() == 0.0) return std::nullopt;
  return kinetic_energy / (kSqrtPi * pot.v0()) * pot.l2() * pot.l2() / pot.l1();
}

cplx apply_lens(cplx rho_minus, std::optional<double> f) {
  if (rho_minus == cplx{}) throw InvalidArgument("apply_lens: rho- must be non-zero");
  if (!f) return rho_minus;
  const cplx inv = 1.0 / rho_minus + 1.0 / *f;
  if (inv == cplx{}) throw PoleError("apply_lens: rho- coincides with -f");
  return 1.0 / inv;
}

LensState lens_state(const PacketParams& p, const GaussianPotential& pot, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("lens_state: t must be non-negative");
  LensState s;
  s.t = t;
  s.t_cross = p.crossing_time();
  s.L = std::abs(p.q_launch);
  s.f = focal_length(pot, p.kinetic_energy());
  const cplx rho2 = p.rho2();
  s.rho1 = p.rho1() + p.v * t;
  s.phi1 = p.kinetic_energy() * t / p.hbar - 0.5 * std::arg(1.0 + p.v * t / p.rho1());
  if (t < s.t_cross) {
    s.rho2_eff = rho2 + p.v * t;
    s.phi2 = -0.5 * std::arg(s.rho2_eff / rho2);
    return s;
  }
  s.crossed = true;
  s.rho_minus = rho2 + s.L;
  s.rho_plus = apply_lens(s.rho_minus, s.f);
  // Without a lens both branches are the same free flight; use the
  // pre-crossing form so the result is bitwise the free one.
  s.rho2_eff = s.f ? s.rho_plus + p.v * (t - s.t_cross) : rho2 + p.v * t;
  s.phi2 = -0.5 * (std::arg(s.rho2_eff / s.rho_plus) + std::arg(s.rho_minus / rho2));
  return s;
}

cplx evolve_rho(const PacketParams& p, const GaussianPotential& pot, double t) {
  return lens_state(p, pot, t).rho2_eff;
}

double predict_sigma2(const PacketParams& p, const GaussianPotential& pot, double t) {
  return sigma_from_rho(p, evolve_rho(p, pot, t));
}

double predict_delta_sigma2(const PacketParams& p, const GaussianPotential& pot, double t) {
  return delta_sigma2(predict_sigma2(p, pot, t), sigma2_free(p, t));
}

ValidityReport check_validity(const PacketParams& p, const GaussianPotential& pot, double L,
                              double t) {
  if (!(L > 0.0)) throw InvalidArgument("check_validity: L must be positive");
  ValidityReport r;
  r.transit = ratio(transit_ratio(pot, L, t, p.m));
  r.transverse = ratio(p.sigma0 / pot.l2());
  r.island = ratio(pot.l1() / L);
  r.packet = ratio(p.sigma0 / L);
  return r;
}

}  // namespace qlens::lens
