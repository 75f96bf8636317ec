#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "qlens/grid.hpp"
#include "qlens/linalg.hpp"
#include "qlens/potential.hpp"

namespace qlens::eikonal {

/// m |q-q'|^2 / (2t) minus the straight-line potential integral.
double eikonal_action(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m = 1.0);

/// |det(-d_q' d_q S)| of eikonal_action by central differences with step
/// 1e-4 max(l1, |q-q'|), Richardson-refined once when `refine`.
/// Throws NumericalDifferentiationError if the stencil is not finite.
double stability_factor(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m = 1.0,
                        bool refine = true);

struct KernelSample {
  double action = 0.0;
  double stability = 0.0;
  int maslov = 0;  // no conjugate points for a shallow island
  cplx amplitude = {};
};

/// sqrt(D)/(2 pi i hbar) exp(i S / hbar) along the straight path.
KernelSample kernel(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m = 1.0,
                    double hbar = 1.0);

/// Receiver/source at +-L e1 + offsets, offsets written in the (e1, e2)
/// frame of the island.
struct FarFieldAction {
  double constant = 0.0;      // -(sqrt(pi)/2)(l1/L) V0 t
  double longitudinal = 0.0;  // S^(1)
  double transverse = 0.0;    // S^(2)
  double total() const { return constant + longitudinal + transverse; }
};

FarFieldAction far_field_action(const GaussianPotential& pot, double L, Vec2 xi, Vec2 xip,
                                double t, double m = 1.0);

/// Receiver point L e1 + xi1 e1 + xi2 e2 in lab coordinates.
Vec2 far_field_point(const GaussianPotential& pot, double L, Vec2 xi);

struct FarFieldStability {
  double longitudinal = 0.0;  // m / t
  double transverse = 0.0;    // m/t - sqrt(pi) l1 V0 t / (4 L l2^2)
  double product() const { return longitudinal * transverse; }
};

/// t^2 |V0| l1 / (m l2^2 L) at or above which far_field_stability refuses.
inline constexpr double kFarFieldGuardRatio = 5.0;

/// Closed-form factorized stability. Throws ValidityDomainError when the
/// transverse factor is not positive or t^2 |V0| l1 / (m l2^2 L) reaches
/// kFarFieldGuardRatio.
FarFieldStability far_field_stability(const GaussianPotential& pot, double L, double t,
                                      double m = 1.0);

struct QuadratureOptions {
  double max_phase_step = std::numbers::pi / 4.0;
  // Source samples with |psi0| below this fraction of max |psi0| are dropped.
  double source_cutoff = 1e-9;
  // The phase-step guard only looks at samples above this fraction.
  double guard_cutoff = 1e-6;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Psi_t(q) = sum_q' d1 d2 K(q, q', t) Psi_0(q') over the source grid, for
/// every q in `points`. Throws OscillationResolutionError when the
/// integrand phase jumps by more than max_phase_step between neighbouring
/// significant source samples.
std::vector<cplx> propagate_by_quadrature(const GaussianPotential& pot, const ComplexField2D& psi0,
                                          double t, std::span<const Vec2> points, double m = 1.0,
                                          double hbar = 1.0, const QuadratureOptions& opts = {});

/// Largest source spacing that keeps the integrand phase step below
/// max_phase_step for sources within `source_radius` of `source_center`
/// carrying plane-wave vector `carrier`, and receivers within
/// `receiver_radius` of `receiver_center`; capped at one eighth of the
/// carrier wavelength.
double recommended_source_spacing(Vec2 carrier, Vec2 source_center, double source_radius,
                                  Vec2 receiver_center, double receiver_radius, double t,
                                  double m = 1.0, double hbar = 1.0,
                                  double max_phase_step = std::numbers::pi / 4.0);

}  // namespace qlens::eikonal
