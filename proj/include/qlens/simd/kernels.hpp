#pragma once

// Data-parallel inner loops of the grid engines. Each instruction set
// provides the same table of entry points; `kernels()` returns the one
// selected at first use (best available, or QLENS_SIMD=scalar|avx2|neon).
// All arrays hold interleaved complex<double> unless typed double.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qlens/linalg.hpp"

namespace qlens::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

struct KernelTable {
  Isa isa;
  // x[i] *= r[i]
  void (*mul_real)(cplx* x, const double* r, std::size_t n);
  // x[i] *= p[i]
  void (*mul_complex)(cplx* x, const cplx* p, std::size_t n);
  // out[i] += v[i] * psi[i]
  void (*add_potential)(cplx* out, const double* v, const cplx* psi, std::size_t n);
  // next[i] = 2 (a h[i] + b cur[i]) - next[i]; `next` holds T_{k-1} on entry.
  void (*chebyshev_step)(cplx* next, const cplx* h, const cplx* cur, double a, double b,
                         std::size_t n);
  // acc[i] += c x[i]
  void (*axpy)(cplx* acc, cplx c, const cplx* x, std::size_t n);
  // sum |x[i]|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  // sum |a[i] - b[i]|^2
  double (*diff_norm_sq)(const cplx* a, const cplx* b, std::size_t n);
  // sum w[i] |x[i]|^2
  double (*weighted_norm_sq)(const cplx* x, const double* w, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the ISA was not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);
std::vector<Isa> available_isas();

const KernelTable& kernels();
Isa active_isa();
/// Overrides the dispatch choice; returns false if `isa` is unavailable.
bool set_active_isa(Isa isa);

namespace detail {
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace qlens::simd
