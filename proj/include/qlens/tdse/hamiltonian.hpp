#pragma once

#include "qlens/grid.hpp"
#include "qlens/potential.hpp"
#include "qlens/tdse/fft.hpp"

namespace qlens::tdse {

/// H = -hbar^2/(2m) Laplacian + V on a periodic grid, kinetic part applied
/// spectrally.
class Hamiltonian {
 public:
  Hamiltonian(const GaussianPotential& pot, const GridSpec& grid, double m = 1.0,
              double hbar = 1.0);

  const GridSpec& grid() const { return grid_; }
  const GaussianPotential& potential() const { return pot_; }
  double mass() const { return m_; }
  double hbar() const { return hbar_; }

  /// V sampled on the grid.
  const RealBuffer& potential_samples() const { return v_; }
  /// hbar^2 |k|^2 / (2m) per FFT bin (unnormalized).
  const RealBuffer& kinetic_samples() const { return t_; }
  const Fft2D& fft() const { return fft_; }

  /// out = H in. `out` must not alias `in`.
  void apply(const cplx* in, cplx* out) const;
  ComplexField2D apply(const ComplexField2D& field) const;

  /// Upper bound of the kinetic spectrum, hbar^2 pi^2/(2m) (1/d1^2 + 1/d2^2).
  double kinetic_cutoff() const;

 private:
  GaussianPotential pot_;
  GridSpec grid_;
  double m_;
  double hbar_;
  RealBuffer v_;
  RealBuffer t_;
  RealBuffer t_scaled_;  // t_ / N, folds the inverse-transform normalization
  Fft2D fft_;
};

ComplexField2D apply_hamiltonian(const GaussianPotential& pot, const ComplexField2D& field,
                                 double m = 1.0, double hbar = 1.0);

/// Re <psi|H|psi> / <psi|psi>.
double energy_expectation(const Hamiltonian& h, const ComplexField2D& field);

}  // namespace qlens::tdse
