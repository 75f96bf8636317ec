#include "qlens/tdse/splitstep.hpp"

#include "qlens/errors.hpp"
#include "qlens/simd/kernels.hpp"

namespace qlens::tdse {

SplitStepper::SplitStepper(const Hamiltonian& h, double dt)
    : h_(h), dt_(dt), half_v_(h.grid().size()), full_v_(h.grid().size()), kinetic_(h.grid().size()) {
  if (!(dt > 0.0)) throw InvalidArgument("SplitStepper: dt must be positive");
  const double hb = h.hbar();
  const double inv_n = 1.0 / static_cast<double>(h.grid().size());
  const auto& v = h.potential_samples();
  const auto& t = h.kinetic_samples();
  for (std::size_t i = 0; i < v.size(); ++i) {
    half_v_[i] = std::polar(1.0, -0.5 * v[i] * dt / hb);
    full_v_[i] = std::polar(1.0, -v[i] * dt / hb);
    kinetic_[i] = std::polar(inv_n, -t[i] * dt / hb);
  }
}

void SplitStepper::advance(ComplexField2D& psi, std::size_t n_steps) const {
  if (n_steps == 0) return;
  if (!(psi.grid() == h_.grid())) throw InvalidArgument("SplitStepper: grid mismatch");
  const std::size_t n = psi.values().size();
  const auto& k = simd::kernels();
  cplx* x = psi.data();
  k.mul_complex(x, half_v_.data(), n);
  for (std::size_t s = 0; s < n_steps; ++s) {
    h_.fft().forward(x);
    k.mul_complex(x, kinetic_.data(), n);
    h_.fft().backward(x);
    k.mul_complex(x, s + 1 == n_steps ? half_v_.data() : full_v_.data(), n);
  }
}

}  // namespace qlens::tdse
