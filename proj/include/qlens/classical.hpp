#pragma once

#include <span>
#include <vector>

#include "qlens/linalg.hpp"
#include "qlens/potential.hpp"

namespace qlens::classical {

/// Path r(tau) on the uniform grid tau_i = i t / n, i = 0..n, in the scaled
/// potential epsilon V.
struct Trajectory {
  double epsilon = 0.0;
  double t = 0.0;
  Vec2 q_start;  // q'
  Vec2 q_end;    // q
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  double shooting_residual = 0.0;  // |r(t) - q|
  int newton_iterations = 0;

  std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
  double dtau() const { return t / static_cast<double>(steps()); }
};

/// The free path q' + (tau/t)(q - q').
Trajectory straight_path(Vec2 qp, Vec2 q, double t, std::size_t n_steps);

/// Solves m r'' = -epsilon grad V(r), r(0) = q', r(t) = q by Newton shooting
/// on the initial velocity with an RK4 integrator (finite-difference
/// Jacobian). Residual is driven to <= 1e-9. epsilon = 0 returns
/// straight_path. Throws InvalidArgument for t <= 0 or n_steps < 200 (or
/// odd), NoTrajectoryError after 50 Newton iterations without convergence.
Trajectory solve_boundary_trajectory(const GaussianPotential& pot, double epsilon, Vec2 qp, Vec2 q,
                                     double t, std::size_t n_steps = 4000, double m = 1.0);

/// int (m/2)|r'|^2 - epsilon V(r) dtau by composite Simpson on the samples.
double action_along(const GaussianPotential& pot, double epsilon, const Trajectory& traj,
                    double m = 1.0);

/// max_i |E_i - E_0| / |E_0| with E = (m/2)|r'|^2 + epsilon V(r).
double energy_drift(const GaussianPotential& pot, const Trajectory& traj, double m = 1.0);

struct ScalingPoint {
  double epsilon = 0.0;
  // |S_eps[r_eps] - S_eps[r_0]| evaluated from the path difference
  // delta = r_eps - r_0, which avoids cancelling two O(1) actions.
  double delta = 0.0;
  // The same by subtracting the two Simpson actions directly.
  double delta_naive = 0.0;
  double action_true = 0.0;
  double action_straight = 0.0;
  double energy_drift = 0.0;
  double shooting_residual = 0.0;
  int newton_iterations = 0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  // Least-squares fit log delta = intercept + slope log epsilon over the
  // points with epsilon > 0.
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the fit in log space
  std::size_t fitted = 0;
};

/// Solves each epsilon concurrently. Throws InvalidArgument if fewer than two
/// positive epsilons are given.
ScalingReport verify_appendix_scaling(const GaussianPotential& pot, Vec2 qp, Vec2 q, double t,
                                      std::span<const double> epsilons,
                                      std::size_t n_steps = 4000, double m = 1.0);

}  // namespace qlens::classical
