#pragma once

#include "qlens/grid.hpp"
#include "qlens/tdse/hamiltonian.hpp"

namespace qlens::tdse {

/// Strang splitting exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h).
class SplitStepper {
 public:
  SplitStepper(const Hamiltonian& h, double dt);

  double dt() const { return dt_; }
  /// n consecutive steps, adjacent potential half-steps fused.
  void advance(ComplexField2D& psi, std::size_t n_steps) const;

 private:
  const Hamiltonian& h_;
  double dt_;
  ComplexBuffer half_v_;
  ComplexBuffer full_v_;
  ComplexBuffer kinetic_;  // includes 1/N
};

}  // namespace qlens::tdse
