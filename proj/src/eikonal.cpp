#include "qlens/eikonal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

#include "qlens/errors.hpp"

namespace qlens::eikonal {

namespace {

constexpr cplx kI{0.0, 1.0};

// Mixed second derivatives M_ij = d^2 f / (dq_i dq'_j) by the four-point
// central stencil with step h.
template <class F>
std::array<double, 4> mixed_hessian(F&& f, Vec2 q, Vec2 qp, double h) {
  const std::array<Vec2, 2> basis = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  std::array<double, 4> out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Vec2 a = h * basis[i];
      const Vec2 b = h * basis[j];
      const double v = f(q + a, qp + b) - f(q + a, qp - b) - f(q - a, qp + b) + f(q - a, qp - b);
      out[2 * i + j] = v / (4.0 * h * h);
    }
  }
  return out;
}

double det2(const std::array<double, 4>& m) { return m[0] * m[3] - m[1] * m[2]; }

double fd_step(const GaussianPotential& pot, Vec2 q, Vec2 qp) {
  return 1e-4 * std::max(pot.l1(), norm(q - qp));
}

}  // namespace

double eikonal_action(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m) {
  if (!(t > 0.0)) throw InvalidArgument("eikonal_action: t must be positive");
  const Vec2 d = q - qp;
  return m * dot(d, d) / (2.0 * t) - straight_line_potential_integral(pot, q, qp, t);
}

double stability_factor(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m,
                        bool refine) {
  if (!(t > 0.0)) throw InvalidArgument("stability_factor: t must be positive");
  auto action = [&](Vec2 a, Vec2 b) { return eikonal_action(pot, a, b, t, m); };
  const double h = fd_step(pot, q, qp);
  auto coarse = mixed_hessian(action, q, qp, h);
  std::array<double, 4> hess = coarse;
  if (refine) {
    const auto fine = mixed_hessian(action, q, qp, 0.5 * h);
    for (int k = 0; k < 4; ++k) hess[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  }
  for (double v : hess) {
    if (!std::isfinite(v)) {
      throw NumericalDifferentiationError("stability_factor: non-finite stencil value");
    }
  }
  // -d_q' d_q S has the opposite sign of every entry; det is unchanged.
  return std::abs(det2(hess));
}

KernelSample kernel(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t, double m,
                    double hbar) {
  KernelSample k;
  k.action = eikonal_action(pot, q, qp, t, m);
  k.stability = stability_factor(pot, q, qp, t, m);
  k.amplitude = std::sqrt(k.stability) / (2.0 * std::numbers::pi * hbar * kI) *
                std::exp(kI * (k.action / hbar));
  return k;
}

Vec2 far_field_point(const GaussianPotential& pot, double L, Vec2 xi) {
  return (L + xi.x) * pot.e1() + xi.y * pot.e2();
}

FarFieldAction far_field_action(const GaussianPotential& pot, double L, Vec2 xi, Vec2 xip,
                                double t, double m) {
  if (!(t > 0.0)) throw InvalidArgument("far_field_action: t must be positive");
  const double l1 = pot.l1(), l2 = pot.l2(), v0 = pot.v0();
  FarFieldAction s;
  s.constant = -kSqrtPi / 2.0 * (l1 / L) * v0 * t;
  const double dl = 2.0 * L + xi.x - xip.x;
  s.longitudinal = m / (2.0 * t) * dl * dl;
  const double dt2 = xi.y - xip.y;
  const double st2 = xi.y + xip.y;
  s.transverse = m / (2.0 * t) * dt2 * dt2 +
                 kSqrtPi / 8.0 * l1 / (L * l2 * l2) * v0 * t * st2 * st2;
  return s;
}

FarFieldStability far_field_stability(const GaussianPotential& pot, double L, double t, double m) {
  if (!(t > 0.0)) throw InvalidArgument("far_field_stability: t must be positive");
  FarFieldStability d;
  d.longitudinal = m / t;
  d.transverse =
      m / t - kSqrtPi * pot.l1() * pot.v0() * t / (4.0 * L * pot.l2() * pot.l2());
  const double ratio = t * t * std::abs(pot.v0()) * pot.l1() / (m * pot.l2() * pot.l2() * L);
  // A repulsive island drives the transverse factor through zero; an
  // attractive one never does, so the ratio itself is checked too.
  if (!(d.transverse > 0.0) || ratio >= kFarFieldGuardRatio) {
    throw ValidityDomainError("far_field_stability: outside the far-field regime", ratio);
  }
  return d;
}

double recommended_source_spacing(Vec2 carrier, Vec2 source_center, double source_radius,
                                  Vec2 receiver_center, double receiver_radius, double t, double m,
                                  double hbar, double max_phase_step) {
  if (!(t > 0.0)) throw InvalidArgument("recommended_source_spacing: t must be positive");
  const double scale = m / (hbar * t);
  const Vec2 mean = carrier - scale * (receiver_center - source_center);
  const double bound = std::max(std::abs(mean.x), std::abs(mean.y)) +
                       scale * (source_radius + receiver_radius);
  const double k = norm(carrier);
  const double cap = k > 0.0 ? 2.0 * std::numbers::pi / k / 8.0 : 1e300;
  return std::min(cap, max_phase_step / bound);
}

std::vector<cplx> propagate_by_quadrature(const GaussianPotential& pot, const ComplexField2D& psi0,
                                          double t, std::span<const Vec2> points, double m,
                                          double hbar, const QuadratureOptions& opts) {
  if (!(t > 0.0)) throw InvalidArgument("propagate_by_quadrature: t must be positive");
  const GridSpec& g = psi0.grid();

  // Significant source samples, remembering their grid position so
  // neighbour phase steps can be checked.
  double peak = 0.0;
  for (const cplx& v : psi0.values()) peak = std::max(peak, std::abs(v));
  const double cutoff = opts.source_cutoff * peak;
  struct Source {
    Vec2 q;
    cplx psi;
    std::size_t i, j;
    bool guarded;
  };
  const double guard_cutoff = opts.guard_cutoff * peak;
  std::vector<Source> sources;
  std::vector<long> index(g.size(), -1);
  for (std::size_t j = 0; j < g.n2; ++j) {
    for (std::size_t i = 0; i < g.n1; ++i) {
      const cplx v = psi0(i, j);
      if (std::abs(v) >= cutoff && v != cplx{}) {
        index[j * g.n1 + i] = static_cast<long>(sources.size());
        sources.push_back({{g.x1(i), g.x2(j)}, v, i, j, std::abs(v) >= guard_cutoff});
      }
    }
  }

  const double weight = g.cell_area();
  const bool free = pot.v0() == 0.0;
  const double free_stability = (m / t) * (m / t);
  const cplx prefactor = 1.0 / (2.0 * std::numbers::pi * hbar * kI);

  std::vector<cplx> out(points.size());
  std::vector<double> worst_step(points.size(), 0.0);

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<cplx> integrand(sources.size());
    for (std::size_t p = begin; p < end; ++p) {
      const Vec2 q = points[p];
      for (std::size_t s = 0; s < sources.size(); ++s) {
        const Source& src = sources[s];
        const Vec2 d = q - src.q;
        double action = m * dot(d, d) / (2.0 * t);
        double stability = free_stability;
        if (!free) {
          action -= straight_line_potential_integral(pot, q, src.q, t);
          stability = stability_factor(pot, q, src.q, t, m, false);
        }
        integrand[s] = std::sqrt(stability) * std::exp(kI * (action / hbar)) * src.psi;
      }
      cplx acc{};
      double worst = 0.0;
      for (std::size_t s = 0; s < sources.size(); ++s) {
        acc += integrand[s];
        const Source& src = sources[s];
        if (!src.guarded) continue;
        if (src.i + 1 < g.n1) {
          const long nb = index[src.j * g.n1 + src.i + 1];
          if (nb >= 0 && sources[nb].guarded) worst = std::max(worst, std::abs(std::arg(integrand[nb] * std::conj(integrand[s]))));
        }
        if (src.j + 1 < g.n2) {
          const long nb = index[(src.j + 1) * g.n1 + src.i];
          if (nb >= 0 && sources[nb].guarded) worst = std::max(worst, std::abs(std::arg(integrand[nb] * std::conj(integrand[s]))));
        }
      }
      out[p] = prefactor * weight * acc;
      worst_step[p] = worst;
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size())));
  if (threads <= 1) {
    work(0, points.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (points.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(points.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }

  const double worst =
      worst_step.empty() ? 0.0 : *std::max_element(worst_step.begin(), worst_step.end());
  if (worst > opts.max_phase_step) {
    throw OscillationResolutionError(
        "propagate_by_quadrature: source grid too coarse for the kernel phase", worst);
  }
  return out;
}

}  // namespace qlens::eikonal
