#include "qlens/tdse/hamiltonian.hpp"

#include <algorithm>
#include <numbers>

#include "qlens/errors.hpp"
#include "qlens/simd/kernels.hpp"

namespace qlens::tdse {

Hamiltonian::Hamiltonian(const GaussianPotential& pot, const GridSpec& grid, double m, double hbar)
    : pot_(pot),
      grid_(grid),
      m_(m),
      hbar_(hbar),
      v_(grid.size()),
      t_(grid.size()),
      t_scaled_(grid.size()),
      fft_(grid) {
  grid.validate();
  if (!(m > 0.0) || !(hbar > 0.0)) throw InvalidArgument("Hamiltonian: m and hbar must be positive");
  const double c = hbar * hbar / (2.0 * m);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t j = 0; j < grid.n2; ++j) {
    const double k2 = grid.k2(j);
    const double x2 = grid.x2(j);
    for (std::size_t i = 0; i < grid.n1; ++i) {
      const std::size_t idx = j * grid.n1 + i;
      const double k1 = grid.k1(i);
      t_[idx] = c * (k1 * k1 + k2 * k2);
      t_scaled_[idx] = t_[idx] * inv_n;
      v_[idx] = pot(Vec2{grid.x1(i), x2});
    }
  }
}

void Hamiltonian::apply(const cplx* in, cplx* out) const {
  const std::size_t n = grid_.size();
  const auto& k = simd::kernels();
  std::copy(in, in + n, out);
  fft_.forward(out);
  k.mul_real(out, t_scaled_.data(), n);
  fft_.backward(out);
  k.add_potential(out, v_.data(), in, n);
}

ComplexField2D Hamiltonian::apply(const ComplexField2D& field) const {
  if (!(field.grid() == grid_)) throw InvalidArgument("Hamiltonian::apply: grid mismatch");
  ComplexField2D out(grid_);
  apply(field.data(), out.data());
  return out;
}

double Hamiltonian::kinetic_cutoff() const {
  const double d1 = grid_.d1(), d2 = grid_.d2();
  return hbar_ * hbar_ * std::numbers::pi * std::numbers::pi / (2.0 * m_) *
         (1.0 / (d1 * d1) + 1.0 / (d2 * d2));
}

ComplexField2D apply_hamiltonian(const GaussianPotential& pot, const ComplexField2D& field,
                                 double m, double hbar) {
  return Hamiltonian(pot, field.grid(), m, hbar).apply(field);
}

double energy_expectation(const Hamiltonian& h, const ComplexField2D& field) {
  const ComplexField2D hpsi = h.apply(field);
  double num = 0.0;
  double den = 0.0;
  const auto a = field.values();
  const auto b = hpsi.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (std::conj(a[i]) * b[i]).real();
    den += std::norm(a[i]);
  }
  if (!(den > 0.0)) throw NonNormalizableState("energy_expectation: zero field");
  return num / den;
}

}  // namespace qlens::tdse
