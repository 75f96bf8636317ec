#pragma once

#include <vector>

#include "qlens/grid.hpp"
#include "qlens/potential.hpp"
#include "qlens/tdse/hamiltonian.hpp"

namespace qlens::tdse {

/// exp(-i H dt / hbar) ~ sum_k coefficients[k] T_k((H - center) / half_width).
struct ChebyshevPlan {
  double dt = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;
  double center = 0.0;
  double delta_e = 0.0;   // half_width, (e_max - e_min) / 2
  double argument = 0.0;  // delta_e dt / hbar
  int n_terms = 0;
  std::vector<cplx> coefficients;  // include exp(-i center dt / hbar)
};

/// Bounds from the grid cutoff: e_min = min(0, V0), e_max = kinetic cutoff +
/// max(V0, 0), widened by 5% of the width on each side. n_terms is the
/// first k past which every |J_k| < tol, plus 10 guard terms.
/// Throws InvalidArgument for dt <= 0 or tol outside (0, 1e-6], PlanningError
/// when tol is below what the coefficient recurrence can resolve.
ChebyshevPlan plan_chebyshev(const GaussianPotential& pot, const GridSpec& grid, double dt,
                             double tol, double m = 1.0, double hbar = 1.0);

/// Plan for explicit spectral bounds (used by plan_chebyshev and tests).
ChebyshevPlan plan_chebyshev_bounds(double e_min, double e_max, double dt, double tol,
                                    double hbar = 1.0);

/// Advances psi by plan.dt in place. Scratch buffers are reused between calls.
class ChebyshevStepper {
 public:
  explicit ChebyshevStepper(const Hamiltonian& h);
  void step(const ChebyshevPlan& plan, ComplexField2D& psi);

 private:
  const Hamiltonian& h_;
  ComplexBuffer prev_, cur_, hbuf_, acc_;
};

}  // namespace qlens::tdse
