// Built with -mavx2 -mfma. Two complex<double> per __m256d.
#include <immintrin.h>

#include "qlens/simd/kernels.hpp"

namespace qlens::simd {

namespace {

inline double* re(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* re(const cplx* p) { return reinterpret_cast<const double*>(p); }

// [r0, r1] -> [r0, r0, r1, r1]
inline __m256d widen_real(const double* r) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(r)), 0x50);
}

// (a + ib)(c + id) for two packed complex numbers.
inline __m256d cmul(__m256d x, __m256d p) {
  const __m256d p_re = _mm256_movedup_pd(p);
  const __m256d p_im = _mm256_permute_pd(p, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, p_re, _mm256_mul_pd(x_sw, p_im));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void mul_real(cplx* x, const double* r, std::size_t n) {
  double* xs = re(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    _mm256_storeu_pd(xs + 2 * i, _mm256_mul_pd(v, widen_real(r + i)));
  }
  for (; i < n; ++i) {
    xs[2 * i] *= r[i];
    xs[2 * i + 1] *= r[i];
  }
}

void mul_complex(cplx* x, const cplx* p, std::size_t n) {
  double* xs = re(x);
  const double* ps = re(p);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    _mm256_storeu_pd(xs + 2 * i, cmul(v, _mm256_loadu_pd(ps + 2 * i)));
  }
  for (; i < n; ++i) {
    const double a = xs[2 * i], b = xs[2 * i + 1];
    const double c = ps[2 * i], d = ps[2 * i + 1];
    xs[2 * i] = a * c - b * d;
    xs[2 * i + 1] = a * d + b * c;
  }
}

void add_potential(cplx* out, const double* v, const cplx* psi, std::size_t n) {
  double* os = re(out);
  const double* ps = re(psi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d o = _mm256_loadu_pd(os + 2 * i);
    const __m256d p = _mm256_loadu_pd(ps + 2 * i);
    _mm256_storeu_pd(os + 2 * i, _mm256_fmadd_pd(widen_real(v + i), p, o));
  }
  for (; i < n; ++i) {
    os[2 * i] += v[i] * ps[2 * i];
    os[2 * i + 1] += v[i] * ps[2 * i + 1];
  }
}

void chebyshev_step(cplx* next, const cplx* h, const cplx* cur, double a, double b,
                    std::size_t n) {
  double* ns = re(next);
  const double* hs = re(h);
  const double* cs = re(cur);
  const __m256d a2 = _mm256_set1_pd(2.0 * a);
  const __m256d b2 = _mm256_set1_pd(2.0 * b);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d t = _mm256_fmsub_pd(b2, _mm256_loadu_pd(cs + i), _mm256_loadu_pd(ns + i));
    _mm256_storeu_pd(ns + i, _mm256_fmadd_pd(a2, _mm256_loadu_pd(hs + i), t));
  }
  for (; i < m; ++i) ns[i] = 2.0 * a * hs[i] + 2.0 * b * cs[i] - ns[i];
}

void axpy(cplx* acc, cplx c, const cplx* x, std::size_t n) {
  double* as = re(acc);
  const double* xs = re(x);
  const __m256d cr = _mm256_set1_pd(c.real());
  const __m256d ci = _mm256_set1_pd(c.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    const __m256d prod = _mm256_fmaddsub_pd(v, cr, _mm256_mul_pd(_mm256_permute_pd(v, 0x5), ci));
    _mm256_storeu_pd(as + 2 * i, _mm256_add_pd(_mm256_loadu_pd(as + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double a = xs[2 * i], b = xs[2 * i + 1];
    as[2 * i] += a * c.real() - b * c.imag();
    as[2 * i + 1] += b * c.real() + a * c.imag();
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xs = re(x);
  const std::size_t m = 2 * n;
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(xs + i);
    const __m256d v1 = _mm256_loadu_pd(xs + i + 4);
    s0 = _mm256_fmadd_pd(v0, v0, s0);
    s1 = _mm256_fmadd_pd(v1, v1, s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < m; ++i) s += xs[i] * xs[i];
  return s;
}

double diff_norm_sq(const cplx* a, const cplx* b, std::size_t n) {
  const double* as = re(a);
  const double* bs = re(b);
  const std::size_t m = 2 * n;
  __m256d s0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(as + i), _mm256_loadu_pd(bs + i));
    s0 = _mm256_fmadd_pd(d, d, s0);
  }
  double s = hsum(s0);
  for (; i < m; ++i) {
    const double d = as[i] - bs[i];
    s += d * d;
  }
  return s;
}

double weighted_norm_sq(const cplx* x, const double* w, std::size_t n) {
  const double* xs = re(x);
  __m256d s0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    s0 = _mm256_fmadd_pd(widen_real(w + i), _mm256_mul_pd(v, v), s0);
  }
  double s = hsum(s0);
  for (; i < n; ++i) s += w[i] * (xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1]);
  return s;
}

constexpr KernelTable kTable{Isa::avx2,     mul_real,     mul_complex,  add_potential,
                             chebyshev_step, axpy,        norm_sq,      diff_norm_sq,
                             weighted_norm_sq};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kTable; }
}  // namespace detail

}  // namespace qlens::simd
