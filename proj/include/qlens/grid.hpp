#pragma once

#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "qlens/linalg.hpp"

namespace qlens {

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
  using value_type = T;
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };
  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Align}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Align}); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Align>&) const noexcept {
    return true;
  }
};

using ComplexBuffer = std::vector<cplx, AlignedAllocator<cplx>>;
using RealBuffer = std::vector<double, AlignedAllocator<double>>;

/// Uniform periodic grid. Sample i along an axis sits at min + i * d with
/// d = (max - min) / n, so max itself is the periodic image of min.
struct GridSpec {
  double x1_min = -1.6;
  double x1_max = 3.2;
  double x2_min = -2.0;
  double x2_max = 2.0;
  std::size_t n1 = 512;
  std::size_t n2 = 256;

  double d1() const { return (x1_max - x1_min) / static_cast<double>(n1); }
  double d2() const { return (x2_max - x2_min) / static_cast<double>(n2); }
  double x1(std::size_t i) const { return x1_min + static_cast<double>(i) * d1(); }
  double x2(std::size_t j) const { return x2_min + static_cast<double>(j) * d2(); }
  std::size_t size() const { return n1 * n2; }
  double cell_area() const { return d1() * d2(); }

  /// Angular wavenumber of FFT bin i on an axis with n points, spacing d.
  static double wavenumber(std::size_t i, std::size_t n, double d);
  double k1(std::size_t i) const { return wavenumber(i, n1, d1()); }
  double k2(std::size_t j) const { return wavenumber(j, n2, d2()); }
  double k1_max() const;
  double k2_max() const;

  /// Throws ConfigurationError unless n1, n2 are powers of two >= 64 and
  /// the extents are ordered.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Complex samples on a GridSpec, row-major with q1 as the fast axis:
/// value(i, j) lives at index j * n1 + i.
class ComplexField2D {
 public:
  ComplexField2D() = default;
  explicit ComplexField2D(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx* data() { return values_.data(); }
  const cplx* data() const { return values_.data(); }

  cplx& operator()(std::size_t i, std::size_t j) { return values_[j * grid_.n1 + i]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return values_[j * grid_.n1 + i]; }

  /// Discrete L2 norm squared: sum |psi|^2 d1 d2.
  double norm_squared() const;
  double norm() const;
  void scale(double s);

 private:
  GridSpec grid_;
  ComplexBuffer values_;
};

/// Discrete L2 distance sqrt(sum |a-b|^2 d1 d2); grids must match.
double l2_distance(const ComplexField2D& a, const ComplexField2D& b);

}  // namespace qlens
