#include "qlens/validate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "qlens/classical.hpp"
#include "qlens/eikonal.hpp"
#include "qlens/gaussian_packet.hpp"
#include "qlens/lens.hpp"
#include "qlens/observables.hpp"
#include "qlens/potential.hpp"
#include "qlens/tdse/hamiltonian.hpp"
#include "qlens/tdse/propagation.hpp"

namespace qlens {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

CheckResult vector_identity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> log_eig(std::log(0.1), std::log(100.0));
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double th = angle(rng);
    const SymMat2 A = build_matrix_A({std::cos(th), std::sin(th)}, std::exp(log_eig(rng)),
                                     std::exp(log_eig(rng)));
    const Vec2 q{coord(rng), coord(rng)}, qp{coord(rng), coord(rng)};
    const auto s = check_vector_identity(A, q, qp);
    worst = std::max(worst, std::abs(s.lhs - s.rhs) / std::max(1.0, std::abs(s.lhs)));
  }
  return {"vector identity, 1000 random cases", worst <= 1e-10, fmt("worst scaled gap %.3g", worst)};
}

CheckResult line_integral_symmetry() {
  const GaussianPotential pot(10.0, {1.0, 0.0}, 100.0, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  bool ok = true;
  for (int i = 0; i < 200 && ok; ++i) {
    const Vec2 q{coord(rng), coord(rng)}, qp{coord(rng), coord(rng)};
    ok = straight_line_potential_integral(pot, q, qp, 0.01) ==
         straight_line_potential_integral(pot, qp, q, 0.01);
  }
  // Just above the degenerate threshold the closed form must meet the
  // limit branch, which uses V at the midpoint.
  const Vec2 q{0.03, 0.2};
  const Vec2 qp = q + Vec2{1e-4, 0.0};
  const double near = straight_line_potential_integral(pot, q, qp, 0.01);
  const double limit = 0.01 * pot(0.5 * (q + qp));
  const double rel = std::abs(near - limit) / limit;
  return {"line integral swap symmetry and degenerate continuity", ok && rel <= 1e-6,
          fmt("continuity gap %.3g", rel)};
}

CheckResult sigma_round_trip() {
  double worst = 0.0;
  for (double s0 : {0.01, 0.1, 1.0}) {
    PacketParams p;
    p.sigma0 = s0;
    worst = std::max(worst, std::abs(sigma_from_rho(p, p.initial_rho()) - s0) / s0);
  }
  return {"sigma(rho(sigma0)) round trip", worst <= 1e-14, fmt("worst relative error %.3g", worst)};
}

CheckResult lens_continuity() {
  const PacketParams p;
  const GaussianPotential pot(40.0, {1.0, 0.0}, 100.0, 1.0);
  const double tc = p.crossing_time();
  // The lens changes only the real part of 1/rho, so the dispersion is
  // continuous across the crossing while rho itself jumps.
  const double before = sigma_from_rho(p, p.rho2() + p.v * tc);
  const double after = lens::predict_sigma2(p, pot, tc);
  const double gap = std::abs(after - before) / before;
  const GaussianPotential flat(0.0, {1.0, 0.0}, 100.0, 1.0);
  bool collapse = true;
  for (double t : {0.0, 0.005, tc, 0.02, 0.032}) {
    collapse = collapse && lens::evolve_rho(p, flat, t) == p.rho2() + p.v * t;
  }
  return {"lens dispersion continuous at crossing; V0 = 0 is free flight", gap <= 1e-12 && collapse,
          fmt("branch mismatch %.3g", gap)};
}

CheckResult kernel_free_limit() {
  const GaussianPotential flat(0.0, {1.0, 0.0}, 100.0, 1.0);
  const cplx a = lens::kv(0.03, -0.02, 0.0267, flat, 0.8);
  const cplx b = lens::k0(0.03, -0.02, 0.0267);
  return {"transverse kernel reduces to free kernel at V0 = 0", a == b, ""};
}

CheckResult far_field_stability() {
  const GaussianPotential pot(10.0, {1.0, 0.0}, 100.0, 1.0);
  const double L = 0.8, t = 2.0 * L / 60.0;
  const double closed = eikonal::far_field_stability(pot, L, t).product();
  const double fd = eikonal::stability_factor(pot, {L, 0.0}, {-L, 0.0}, t);
  const double rel = std::abs(closed - fd) / fd;
  return {"far-field stability factor vs finite differences", rel <= 1e-3,
          fmt("relative gap %.3g", rel)};
}

CheckResult appendix_scaling() {
  const GaussianPotential pot(10.0, {1.0, 0.0}, 100.0, 1.0);
  const std::vector<double> eps{0.02, 0.04, 0.08, 0.16, 0.32};
  const auto r = classical::verify_appendix_scaling(pot, {-0.8, 0.05}, {0.8, 0.05}, 0.0267, eps);
  double drift = 0.0;
  for (const auto& p : r.points) drift = std::max(drift, p.energy_drift);
  return {"action difference scales as epsilon^2",
          r.slope >= 1.9 && r.slope <= 2.1 && drift <= 1e-8,
          fmt("slope %.6f, worst energy drift %.3g", r.slope, drift)};
}

CheckResult engines_agree() {
  const GaussianPotential pot(40.0, {1.0, 0.0}, 100.0, 1.0);
  GridSpec g;
  g.n1 = 256;
  g.n2 = 128;
  const PacketParams p;
  const ComplexField2D psi0 = synthesize_packet(pot, p, g);
  tdse::PropagationSettings s;
  s.sample_times = {0.0267};
  s.dt = 2.5e-4;
  const auto cheb = tdse::propagate_chebyshev(pot, psi0, s);
  s.dt = 1e-5;
  const auto split = tdse::propagate_splitstep(pot, psi0, s);
  const double dist = l2_distance(cheb.back().field, split.back().field);
  const double drift = std::abs(cheb.back().norm - 1.0);
  return {"Chebyshev and split-step agree (256 x 128 grid, V0 = 40)",
          dist <= 1e-8 && drift <= 1e-10, fmt("L2 distance %.3g, norm drift %.3g", dist, drift)};
}

CheckResult initial_energy() {
  const GaussianPotential flat(0.0, {1.0, 0.0}, 100.0, 1.0);
  GridSpec g;
  g.n1 = 256;
  g.n2 = 128;
  const ComplexField2D psi0 = synthesize_packet(flat, PacketParams{}, g);
  const double e = tdse::energy_expectation(tdse::Hamiltonian(flat, g), psi0);
  // |psi|^2 ~ exp(-z^2/sigma0^2) per axis gives <p^2> = hbar^2/(2 sigma0^2)
  // per axis: 1800 + 2 * 25.
  const double rel = std::abs(e - 1850.0) / 1850.0;
  return {"initial packet energy E0 + hbar^2/(2 m sigma0^2)", rel <= 1e-3,
          fmt("<H> = %.6f (relative gap %.3g)", e, rel)};
}

}  // namespace

std::vector<CheckResult> run_validation() {
  const std::vector<std::function<CheckResult()>> checks = {
      vector_identity, line_integral_symmetry, sigma_round_trip, lens_continuity,
      kernel_free_limit, far_field_stability, appendix_scaling, initial_energy, engines_agree};
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  }
  return out;
}

}  // namespace qlens
