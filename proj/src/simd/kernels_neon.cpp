// AArch64 variant: one complex<double> per float64x2_t.
#include <arm_neon.h>

#include "qlens/simd/kernels.hpp"

namespace qlens::simd {

namespace {

inline double* re(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* re(const cplx* p) { return reinterpret_cast<const double*>(p); }

inline float64x2_t cmul(float64x2_t x, float64x2_t p) {
  // [a c - b d, a d + b c]
  const float64x2_t x_sw = vextq_f64(x, x, 1);                  // [b, a]
  const float64x2_t p_re = vdupq_laneq_f64(p, 0);               // [c, c]
  const float64x2_t p_im = vdupq_laneq_f64(p, 1);               // [d, d]
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(x, p_re), vmulq_f64(x_sw, p_im), sign);
}

void mul_real(cplx* x, const double* r, std::size_t n) {
  double* xs = re(x);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(xs + 2 * i, vmulq_n_f64(vld1q_f64(xs + 2 * i), r[i]));
  }
}

void mul_complex(cplx* x, const cplx* p, std::size_t n) {
  double* xs = re(x);
  const double* ps = re(p);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(xs + 2 * i, cmul(vld1q_f64(xs + 2 * i), vld1q_f64(ps + 2 * i)));
  }
}

void add_potential(cplx* out, const double* v, const cplx* psi, std::size_t n) {
  double* os = re(out);
  const double* ps = re(psi);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(os + 2 * i, vfmaq_n_f64(vld1q_f64(os + 2 * i), vld1q_f64(ps + 2 * i), v[i]));
  }
}

void chebyshev_step(cplx* next, const cplx* h, const cplx* cur, double a, double b,
                    std::size_t n) {
  double* ns = re(next);
  const double* hs = re(h);
  const double* cs = re(cur);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t t = vfmsq_f64(vmulq_n_f64(vld1q_f64(cs + 2 * i), 2.0 * b),
                                    vld1q_f64(ns + 2 * i), vdupq_n_f64(1.0));
    vst1q_f64(ns + 2 * i, vfmaq_n_f64(t, vld1q_f64(hs + 2 * i), 2.0 * a));
  }
}

void axpy(cplx* acc, cplx c, const cplx* x, std::size_t n) {
  double* as = re(acc);
  const double* xs = re(x);
  const float64x2_t cv = {c.real(), c.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(as + 2 * i, vaddq_f64(vld1q_f64(as + 2 * i), cmul(vld1q_f64(xs + 2 * i), cv)));
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xs = re(x);
  float64x2_t s = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(xs + 2 * i);
    s = vfmaq_f64(s, v, v);
  }
  return vaddvq_f64(s);
}

double diff_norm_sq(const cplx* a, const cplx* b, std::size_t n) {
  const double* as = re(a);
  const double* bs = re(b);
  float64x2_t s = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t d = vsubq_f64(vld1q_f64(as + 2 * i), vld1q_f64(bs + 2 * i));
    s = vfmaq_f64(s, d, d);
  }
  return vaddvq_f64(s);
}

double weighted_norm_sq(const cplx* x, const double* w, std::size_t n) {
  const double* xs = re(x);
  float64x2_t s = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(xs + 2 * i);
    s = vfmaq_n_f64(s, vmulq_f64(v, v), w[i]);
  }
  return vaddvq_f64(s);
}

constexpr KernelTable kTable{Isa::neon,     mul_real,     mul_complex,  add_potential,
                             chebyshev_step, axpy,        norm_sq,      diff_norm_sq,
                             weighted_norm_sq};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kTable; }
}  // namespace detail

}  // namespace qlens::simd
