#include "qlens/simd/kernels.hpp"

namespace qlens::simd {

namespace {

inline double* re(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* re(const cplx* p) { return reinterpret_cast<const double*>(p); }

void mul_real(cplx* x, const double* r, std::size_t n) {
  double* xs = re(x);
  for (std::size_t i = 0; i < n; ++i) {
    xs[2 * i] *= r[i];
    xs[2 * i + 1] *= r[i];
  }
}

void mul_complex(cplx* x, const cplx* p, std::size_t n) {
  double* xs = re(x);
  const double* ps = re(p);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = xs[2 * i], b = xs[2 * i + 1];
    const double c = ps[2 * i], d = ps[2 * i + 1];
    xs[2 * i] = a * c - b * d;
    xs[2 * i + 1] = a * d + b * c;
  }
}

void add_potential(cplx* out, const double* v, const cplx* psi, std::size_t n) {
  double* os = re(out);
  const double* ps = re(psi);
  for (std::size_t i = 0; i < n; ++i) {
    os[2 * i] += v[i] * ps[2 * i];
    os[2 * i + 1] += v[i] * ps[2 * i + 1];
  }
}

void chebyshev_step(cplx* next, const cplx* h, const cplx* cur, double a, double b,
                    std::size_t n) {
  double* ns = re(next);
  const double* hs = re(h);
  const double* cs = re(cur);
  const double a2 = 2.0 * a, b2 = 2.0 * b;
  for (std::size_t i = 0; i < 2 * n; ++i) ns[i] = a2 * hs[i] + b2 * cs[i] - ns[i];
}

void axpy(cplx* acc, cplx c, const cplx* x, std::size_t n) {
  double* as = re(acc);
  const double* xs = re(x);
  const double cr = c.real(), ci = c.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = xs[2 * i], b = xs[2 * i + 1];
    as[2 * i] += a * cr - b * ci;
    as[2 * i + 1] += b * cr + a * ci;
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xs = re(x);
  double s = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) s += xs[i] * xs[i];
  return s;
}

double diff_norm_sq(const cplx* a, const cplx* b, std::size_t n) {
  const double* as = re(a);
  const double* bs = re(b);
  double s = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double d = as[i] - bs[i];
    s += d * d;
  }
  return s;
}

double weighted_norm_sq(const cplx* x, const double* w, std::size_t n) {
  const double* xs = re(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += w[i] * (xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1]);
  }
  return s;
}

constexpr KernelTable kTable{Isa::scalar, mul_real,     mul_complex,  add_potential,
                             chebyshev_step, axpy,     norm_sq,      diff_norm_sq,
                             weighted_norm_sq};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace qlens::simd
