#include "qlens/classical.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "qlens/errors.hpp"

namespace qlens::classical {

namespace {

struct State {
  Vec2 r;
  Vec2 v;
};

Vec2 acceleration(const GaussianPotential& pot, double epsilon, double m, Vec2 r) {
  return (-epsilon / m) * pot.gradient(r);
}

State rk4_step(const GaussianPotential& pot, double epsilon, double m, const State& s, double h) {
  const Vec2 a1 = acceleration(pot, epsilon, m, s.r);
  const Vec2 r2 = s.r + (0.5 * h) * s.v;
  const Vec2 v2 = s.v + (0.5 * h) * a1;
  const Vec2 a2 = acceleration(pot, epsilon, m, r2);
  const Vec2 r3 = s.r + (0.5 * h) * v2;
  const Vec2 v3 = s.v + (0.5 * h) * a2;
  const Vec2 a3 = acceleration(pot, epsilon, m, r3);
  const Vec2 r4 = s.r + h * v3;
  const Vec2 v4 = s.v + h * a3;
  const Vec2 a4 = acceleration(pot, epsilon, m, r4);
  return {s.r + (h / 6.0) * (s.v + 2.0 * v2 + 2.0 * v3 + v4),
          s.v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)};
}

Vec2 endpoint(const GaussianPotential& pot, double epsilon, double m, Vec2 qp, Vec2 v0, double t,
              std::size_t n) {
  const double h = t / static_cast<double>(n);
  State s{qp, v0};
  for (std::size_t i = 0; i < n; ++i) s = rk4_step(pot, epsilon, m, s, h);
  return s.r;
}

void check_steps(double t, std::size_t n_steps) {
  if (!(t > 0.0)) throw InvalidArgument("trajectory: t must be positive");
  if (n_steps < 200 || n_steps % 2 != 0) {
    throw InvalidArgument("trajectory: n_steps must be even and >= 200");
  }
}

// Composite Simpson over n + 1 equally spaced samples, n even.
template <class F>
double simpson(std::size_t n, double h, F&& f) {
  double acc = f(0) + f(n);
  for (std::size_t i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i);
  return acc * h / 3.0;
}

}  // namespace

Trajectory straight_path(Vec2 qp, Vec2 q, double t, std::size_t n_steps) {
  check_steps(t, n_steps);
  Trajectory traj;
  traj.t = t;
  traj.q_start = qp;
  traj.q_end = q;
  const Vec2 d = q - qp;
  const Vec2 v = (1.0 / t) * d;
  traj.positions.resize(n_steps + 1);
  traj.velocities.assign(n_steps + 1, v);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    traj.positions[i] = qp + (static_cast<double>(i) / static_cast<double>(n_steps)) * d;
  }
  traj.positions.back() = q;
  return traj;
}

Trajectory solve_boundary_trajectory(const GaussianPotential& pot, double epsilon, Vec2 qp, Vec2 q,
                                     double t, std::size_t n_steps, double m) {
  check_steps(t, n_steps);
  if (!(m > 0.0)) throw InvalidArgument("trajectory: m must be positive");
  if (epsilon == 0.0 || pot.v0() == 0.0) {
    Trajectory traj = straight_path(qp, q, t, n_steps);
    traj.epsilon = epsilon;
    return traj;
  }

  const double scale = std::max({1.0, norm(q), norm(qp)});
  Vec2 v = (1.0 / t) * (q - qp);
  Vec2 miss = endpoint(pot, epsilon, m, qp, v, t, n_steps) - q;
  int it = 0;
  double best = norm(miss);
  for (; it < 50; ++it) {
    if (best <= 1e-14 * scale) break;
    const double hv = 1e-6 * std::max(1.0, norm(v));
    const Vec2 c1p = endpoint(pot, epsilon, m, qp, v + Vec2{hv, 0.0}, t, n_steps);
    const Vec2 c1m = endpoint(pot, epsilon, m, qp, v - Vec2{hv, 0.0}, t, n_steps);
    const Vec2 c2p = endpoint(pot, epsilon, m, qp, v + Vec2{0.0, hv}, t, n_steps);
    const Vec2 c2m = endpoint(pot, epsilon, m, qp, v - Vec2{0.0, hv}, t, n_steps);
    const Vec2 col1 = (0.5 / hv) * (c1p - c1m);
    const Vec2 col2 = (0.5 / hv) * (c2p - c2m);
    const double det = col1.x * col2.y - col2.x * col1.y;
    if (!std::isfinite(det) || det == 0.0) break;
    const Vec2 step{(col2.y * miss.x - col2.x * miss.y) / det,
                    (-col1.y * miss.x + col1.x * miss.y) / det};
    const Vec2 v_new = v - step;
    const Vec2 miss_new = endpoint(pot, epsilon, m, qp, v_new, t, n_steps) - q;
    const double r_new = norm(miss_new);
    if (!std::isfinite(r_new)) break;
    if (r_new >= best && best <= 1e-9) break;  // stalled at roundoff
    v = v_new;
    miss = miss_new;
    best = r_new;
  }
  if (!(best <= 1e-9)) {
    throw NoTrajectoryError("solve_boundary_trajectory: shooting did not converge (residual " +
                            std::to_string(best) + ")");
  }

  Trajectory traj;
  traj.epsilon = epsilon;
  traj.t = t;
  traj.q_start = qp;
  traj.q_end = q;
  traj.shooting_residual = best;
  traj.newton_iterations = it;
  traj.positions.resize(n_steps + 1);
  traj.velocities.resize(n_steps + 1);
  const double h = t / static_cast<double>(n_steps);
  State s{qp, v};
  traj.positions[0] = s.r;
  traj.velocities[0] = s.v;
  for (std::size_t i = 1; i <= n_steps; ++i) {
    s = rk4_step(pot, epsilon, m, s, h);
    traj.positions[i] = s.r;
    traj.velocities[i] = s.v;
  }
  return traj;
}

double action_along(const GaussianPotential& pot, double epsilon, const Trajectory& traj,
                    double m) {
  const std::size_t n = traj.steps();
  if (n < 2 || n % 2 != 0) throw InvalidArgument("action_along: need an even number of steps");
  return simpson(n, traj.dtau(), [&](std::size_t i) {
    const Vec2 v = traj.velocities[i];
    const double kin = 0.5 * m * dot(v, v);
    return epsilon == 0.0 ? kin : kin - epsilon * pot(traj.positions[i]);
  });
}

double energy_drift(const GaussianPotential& pot, const Trajectory& traj, double m) {
  auto energy = [&](std::size_t i) {
    const Vec2 v = traj.velocities[i];
    return 0.5 * m * dot(v, v) + traj.epsilon * pot(traj.positions[i]);
  };
  const double e0 = energy(0);
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.positions.size(); ++i) {
    worst = std::max(worst, std::abs(energy(i) - e0));
  }
  return e0 == 0.0 ? worst : worst / std::abs(e0);
}

namespace {

ScalingPoint scaling_point(const GaussianPotential& pot, Vec2 qp, Vec2 q, double t, double eps,
                           std::size_t n_steps, double m) {
  ScalingPoint pt;
  pt.epsilon = eps;
  const Trajectory bent = solve_boundary_trajectory(pot, eps, qp, q, t, n_steps, m);
  const Trajectory line = straight_path(qp, q, t, n_steps);
  pt.action_true = action_along(pot, eps, bent, m);
  pt.action_straight = action_along(pot, eps, line, m);
  pt.delta_naive = std::abs(pt.action_true - pt.action_straight);
  pt.energy_drift = energy_drift(pot, bent, m);
  pt.shooting_residual = bent.shooting_residual;
  pt.newton_iterations = bent.newton_iterations;

  // S[r0 + d] - S[r0] = m v0.(d(t) - d(0)) + int (m/2)|d'|^2 - eps (V(r0+d) - V(r0)).
  const Vec2 v0 = line.velocities[0];
  const double boundary = m * dot(v0, (bent.positions.back() - line.positions.back()) -
                                          (bent.positions.front() - line.positions.front()));
  const double bulk = simpson(n_steps, bent.dtau(), [&](std::size_t i) {
    const Vec2 dv = bent.velocities[i] - line.velocities[i];
    const double dpot = pot(bent.positions[i]) - pot(line.positions[i]);
    return 0.5 * m * dot(dv, dv) - eps * dpot;
  });
  pt.delta = std::abs(boundary + bulk);
  return pt;
}

}  // namespace

ScalingReport verify_appendix_scaling(const GaussianPotential& pot, Vec2 qp, Vec2 q, double t,
                                      std::span<const double> epsilons, std::size_t n_steps,
                                      double m) {
  const auto positive = std::count_if(epsilons.begin(), epsilons.end(),
                                      [](double e) { return e > 0.0; });
  if (positive < 2) throw InvalidArgument("verify_appendix_scaling: need two positive epsilons");

  std::vector<std::future<ScalingPoint>> jobs;
  jobs.reserve(epsilons.size());
  for (double eps : epsilons) {
    jobs.push_back(std::async(std::launch::async, scaling_point, std::cref(pot), qp, q, t, eps,
                              n_steps, m));
  }
  ScalingReport report;
  for (auto& j : jobs) report.points.push_back(j.get());

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& p : report.points) {
    if (!(p.epsilon > 0.0) || !(p.delta > 0.0)) continue;
    const double x = std::log(p.epsilon), y = std::log(p.delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw InvalidArgument("verify_appendix_scaling: fewer than two nonzero deltas");
  const double dn = static_cast<double>(n);
  report.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  report.intercept = (sy - report.slope * sx) / dn;
  double ss = 0.0;
  for (const auto& p : report.points) {
    if (!(p.epsilon > 0.0) || !(p.delta > 0.0)) continue;
    const double r = std::log(p.delta) - (report.intercept + report.slope * std::log(p.epsilon));
    ss += r * r;
  }
  report.residual = std::sqrt(ss / dn);
  report.fitted = n;
  return report;
}

}  // namespace qlens::classical
