#pragma once

#include <memory>

#include "qlens/grid.hpp"

namespace qlens::tdse {

/// In-place unnormalized 2D DFT over a GridSpec (n2 rows of n1). Plans are
/// made with FFTW_ESTIMATE so repeated runs are bitwise reproducible;
/// planning is serialized internally, execution is thread-safe.
class Fft2D {
 public:
  explicit Fft2D(const GridSpec& grid);
  ~Fft2D();
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  /// Buffers must hold grid.size() values and be 64-byte aligned.
  void forward(cplx* data) const;
  void backward(cplx* data) const;

  const GridSpec& grid() const { return grid_; }

 private:
  struct Plans;
  GridSpec grid_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace qlens::tdse
