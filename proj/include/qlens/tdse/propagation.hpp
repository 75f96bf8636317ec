#pragma once

#include <functional>
#include <vector>

#include "qlens/grid.hpp"
#include "qlens/potential.hpp"

namespace qlens::tdse {

struct PropagationSettings {
  double dt = 2.5e-4;
  double tol = 1e-12;  // Chebyshev truncation only
  // Ascending, non-negative. Intervals between samples are split into
  // ceil(interval / dt) equal steps.
  std::vector<double> sample_times;
  double boundary_limit = 1e-8;
  std::size_t boundary_band = 2;
  bool keep_fields = true;
  double m = 1.0;
  double hbar = 1.0;
};

struct Snapshot {
  double t = 0.0;
  double norm = 0.0;
  double edge_mass = 0.0;
  ComplexField2D field;  // empty unless keep_fields
};

/// Called once per sample with the live field.
using SnapshotObserver = std::function<void(double t, const ComplexField2D& field)>;

/// 0, interval, 2 interval, ... and t_final itself.
std::vector<double> sample_schedule(double t_final, double interval);

/// Both engines throw BoundaryContaminationError as soon as the mass in the
/// outer `boundary_band` rows/columns exceeds boundary_limit.
std::vector<Snapshot> propagate_chebyshev(const GaussianPotential& pot,
                                          const ComplexField2D& psi0,
                                          const PropagationSettings& settings,
                                          const SnapshotObserver& observer = {});

std::vector<Snapshot> propagate_splitstep(const GaussianPotential& pot,
                                          const ComplexField2D& psi0,
                                          const PropagationSettings& settings,
                                          const SnapshotObserver& observer = {});

}  // namespace qlens::tdse
