#include "qlens/tdse/propagation.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "qlens/errors.hpp"
#include "qlens/observables.hpp"
#include "qlens/tdse/chebyshev.hpp"
#include "qlens/tdse/hamiltonian.hpp"
#include "qlens/tdse/splitstep.hpp"

namespace qlens::tdse {

std::vector<double> sample_schedule(double t_final, double interval) {
  if (!(t_final >= 0.0) || !(interval > 0.0)) {
    throw InvalidArgument("sample_schedule: need t_final >= 0 and interval > 0");
  }
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor(t_final / interval + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(static_cast<double>(i) * interval);
  if (t_final - out.back() > 1e-12 * std::max(1.0, t_final)) out.push_back(t_final);
  return out;
}

namespace {

void validate_settings(const PropagationSettings& s) {
  if (!(s.dt > 0.0)) throw InvalidArgument("propagate: dt must be positive");
  if (s.sample_times.empty()) throw InvalidArgument("propagate: no sample times");
  double prev = 0.0;
  for (double t : s.sample_times) {
    if (!(t >= prev)) throw InvalidArgument("propagate: sample times must be ascending and >= 0");
    prev = t;
  }
}

std::size_t substeps(double interval, double dt) {
  return static_cast<std::size_t>(std::ceil(interval / dt - 1e-9));
}

void guard_boundary(const ComplexField2D& psi, const PropagationSettings& s, double t) {
  const double edge = edge_mass(psi, s.boundary_band);
  if (edge > s.boundary_limit) {
    throw BoundaryContaminationError(
        "propagate: wave function reached the grid boundary at t = " + std::to_string(t), edge);
  }
}

// Drives `advance(psi, interval, n_steps)` between sample times.
template <class Advance>
std::vector<Snapshot> drive(const ComplexField2D& psi0, const PropagationSettings& s,
                            const SnapshotObserver& observer, Advance&& advance) {
  validate_settings(s);
  ComplexField2D psi = psi0;
  std::vector<Snapshot> out;
  out.reserve(s.sample_times.size());
  double t = 0.0;
  for (double target : s.sample_times) {
    const double interval = target - t;
    if (interval > 0.0) {
      const std::size_t n = substeps(interval, s.dt);
      advance(psi, interval, n, t);
      t = target;
    }
    Snapshot snap;
    snap.t = target;
    snap.norm = psi.norm();
    snap.edge_mass = edge_mass(psi, s.boundary_band);
    if (snap.edge_mass > s.boundary_limit) guard_boundary(psi, s, target);
    if (observer) observer(target, psi);
    if (s.keep_fields) snap.field = psi;
    out.push_back(std::move(snap));
  }
  return out;
}

}  // namespace

std::vector<Snapshot> propagate_chebyshev(const GaussianPotential& pot,
                                          const ComplexField2D& psi0,
                                          const PropagationSettings& settings,
                                          const SnapshotObserver& observer) {
  const Hamiltonian h(pot, psi0.grid(), settings.m, settings.hbar);
  ChebyshevStepper stepper(h);
  std::map<double, ChebyshevPlan> plans;
  return drive(psi0, settings, observer,
               [&](ComplexField2D& psi, double interval, std::size_t n, double t0) {
                 const double dt = interval / static_cast<double>(n);
                 auto it = plans.find(dt);
                 if (it == plans.end()) {
                   it = plans
                            .emplace(dt, plan_chebyshev(pot, psi.grid(), dt, settings.tol,
                                                        settings.m, settings.hbar))
                            .first;
                 }
                 for (std::size_t s = 0; s < n; ++s) {
                   stepper.step(it->second, psi);
                   guard_boundary(psi, settings, t0 + static_cast<double>(s + 1) * dt);
                 }
               });
}

std::vector<Snapshot> propagate_splitstep(const GaussianPotential& pot,
                                          const ComplexField2D& psi0,
                                          const PropagationSettings& settings,
                                          const SnapshotObserver& observer) {
  const Hamiltonian h(pot, psi0.grid(), settings.m, settings.hbar);
  std::map<double, std::unique_ptr<SplitStepper>> steppers;
  return drive(psi0, settings, observer,
               [&](ComplexField2D& psi, double interval, std::size_t n, double t0) {
                 const double dt = interval / static_cast<double>(n);
                 auto& stepper = steppers[dt];
                 if (!stepper) stepper = std::make_unique<SplitStepper>(h, dt);
                 stepper->advance(psi, n);
                 guard_boundary(psi, settings, t0 + interval);
               });
}

}  // namespace qlens::tdse
