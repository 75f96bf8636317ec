#include "qlens/tdse/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace qlens::tdse {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft2D::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

Fft2D::Fft2D(const GridSpec& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  ComplexBuffer scratch(grid.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const int rows = static_cast<int>(grid.n2);
  const int cols = static_cast<int>(grid.n1);
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_dft_2d(rows, cols, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_2d(rows, cols, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() = default;
Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&&) noexcept = default;

void Fft2D::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void Fft2D::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
}

}  // namespace qlens::tdse
