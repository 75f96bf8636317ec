#include "qlens/tdse/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlens/bessel.hpp"
#include "qlens/errors.hpp"
#include "qlens/simd/kernels.hpp"

namespace qlens::tdse {

ChebyshevPlan plan_chebyshev_bounds(double e_min, double e_max, double dt, double tol,
                                    double hbar) {
  if (!(dt > 0.0)) throw InvalidArgument("plan_chebyshev: dt must be positive");
  if (!(tol > 0.0) || tol > 1e-6) throw InvalidArgument("plan_chebyshev: tol must lie in (0, 1e-6]");
  if (tol < 1e-280) throw PlanningError("plan_chebyshev: tol below coefficient underflow");
  if (!(e_max > e_min)) throw InvalidArgument("plan_chebyshev: empty spectral range");

  ChebyshevPlan plan;
  plan.dt = dt;
  const double margin = 0.05 * (e_max - e_min);
  plan.e_min = e_min - margin;
  plan.e_max = e_max + margin;
  plan.center = 0.5 * (plan.e_max + plan.e_min);
  plan.delta_e = 0.5 * (plan.e_max - plan.e_min);
  plan.argument = plan.delta_e * dt / hbar;
  const double r = plan.argument;

  int max_order = static_cast<int>(std::ceil(r + 40.0 + 15.0 * std::cbrt(r)));
  std::vector<double> j = bessel_j_sequence(r, max_order);
  while (std::abs(j.back()) >= tol) {
    max_order *= 2;
    j = bessel_j_sequence(r, max_order);
  }
  int last = max_order;
  while (last >= 0 && std::abs(j[last]) < tol) --last;
  plan.n_terms = last + 1 + 10;
  if (plan.n_terms > max_order + 1) {
    j = bessel_j_sequence(r, plan.n_terms - 1);
  }

  const cplx phase = std::exp(cplx(0.0, -plan.center * dt / hbar));
  plan.coefficients.resize(static_cast<std::size_t>(plan.n_terms));
  cplx mi_pow = 1.0;
  for (int k = 0; k < plan.n_terms; ++k) {
    const double w = (k == 0 ? 1.0 : 2.0) * j[k];
    plan.coefficients[k] = phase * mi_pow * w;
    mi_pow *= cplx(0.0, -1.0);
  }
  return plan;
}

ChebyshevPlan plan_chebyshev(const GaussianPotential& pot, const GridSpec& grid, double dt,
                             double tol, double m, double hbar) {
  grid.validate();
  const double v0 = pot.v0();
  const double d1 = grid.d1(), d2 = grid.d2();
  const double kin = hbar * hbar * std::numbers::pi * std::numbers::pi / (2.0 * m) * (1.0 / (d1 * d1) + 1.0 / (d2 * d2));
  return plan_chebyshev_bounds(std::min(0.0, v0), kin + std::max(v0, 0.0), dt, tol, hbar);
}

ChebyshevStepper::ChebyshevStepper(const Hamiltonian& h)
    : h_(h),
      prev_(h.grid().size()),
      cur_(h.grid().size()),
      hbuf_(h.grid().size()),
      acc_(h.grid().size()) {}

void ChebyshevStepper::step(const ChebyshevPlan& plan, ComplexField2D& psi) {
  const std::size_t n = h_.grid().size();
  if (!(psi.grid() == h_.grid())) throw InvalidArgument("ChebyshevStepper: grid mismatch");
  const auto& k = simd::kernels();
  const double a = 1.0 / plan.delta_e;
  const double b = -plan.center / plan.delta_e;

  // T_0 = psi, T_1 = Ht psi
  std::copy(psi.data(), psi.data() + n, prev_.data());
  std::fill(acc_.begin(), acc_.end(), cplx{});
  k.axpy(acc_.data(), plan.coefficients[0], prev_.data(), n);
  if (plan.n_terms < 2) {
    std::copy(acc_.begin(), acc_.end(), psi.data());
    return;
  }
  h_.apply(prev_.data(), hbuf_.data());
  for (std::size_t i = 0; i < n; ++i) cur_[i] = a * hbuf_[i] + b * prev_[i];
  k.axpy(acc_.data(), plan.coefficients[1], cur_.data(), n);

  for (int t = 2; t < plan.n_terms; ++t) {
    h_.apply(cur_.data(), hbuf_.data());
    k.chebyshev_step(prev_.data(), hbuf_.data(), cur_.data(), a, b, n);
    k.axpy(acc_.data(), plan.coefficients[t], prev_.data(), n);
    std::swap(prev_, cur_);
  }
  std::copy(acc_.begin(), acc_.end(), psi.data());
}

}  // namespace qlens::tdse
