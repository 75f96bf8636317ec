#include "qlens/potential.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qlens/errors.hpp"

namespace qlens {

namespace {

constexpr double kUnitTolerance = 1e-12;

// 16-point Gauss-Legendre nodes/weights on [-1, 1], positive half.
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

// Below this span the erf difference is integrated directly.
constexpr double kShortSpan = 0.5;

// erf(mid + half) - erf(mid - half), half > 0, without cancellation.
// Taking the span as an input keeps short segments accurate: forming it
// as a difference of two O(1) arguments would lose digits.
double erf_difference(double mid, double half) {
  if (2.0 * half < kShortSpan) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      const double a = mid + half * kGlNodes[i];
      const double b = mid - half * kGlNodes[i];
      acc += kGlWeights[i] * (std::exp(-a * a) + std::exp(-b * b));
    }
    return acc * half * std::numbers::inv_sqrtpi * 2.0;
  }
  const double hi = mid + half;
  const double lo = mid - half;
  if (lo >= 0.0) return std::erfc(lo) - std::erfc(hi);
  if (hi <= 0.0) return std::erfc(-hi) - std::erfc(-lo);
  return std::erf(hi) - std::erf(lo);
}

}  // namespace

SymMat2 build_matrix_A(Vec2 e1, double a1, double a2) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw InvalidArgument("build_matrix_A: eigenvalues must be positive");
  }
  if (std::abs(norm(e1) - 1.0) > kUnitTolerance) {
    throw InvalidArgument("build_matrix_A: e1 must be a unit vector");
  }
  const Vec2 e2 = perp(e1);
  return {a1 * e1.x * e1.x + a2 * e2.x * e2.x,
          a1 * e1.x * e1.y + a2 * e2.x * e2.y,
          a1 * e1.y * e1.y + a2 * e2.y * e2.y};
}

GaussianPotential::GaussianPotential(double v0, Vec2 e1, double a1, double a2)
    : v0_(v0), e1_(e1), a1_(a1), a2_(a2), A_(build_matrix_A(e1, a1, a2)) {
  if (!std::isfinite(v0)) throw InvalidArgument("GaussianPotential: V0 must be finite");
}

GaussianPotential GaussianPotential::from_lengths(double v0, Vec2 e1, double l1, double l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) {
    throw InvalidArgument("GaussianPotential: lengths must be positive");
  }
  return {v0, e1, 1.0 / (l1 * l1), 1.0 / (l2 * l2)};
}

Vec2 GaussianPotential::gradient(Vec2 q) const {
  return (-2.0 * (*this)(q)) * (A_ * q);
}

double quadratic_gap(const GaussianPotential& pot, Vec2 q, Vec2 qp) {
  const Vec2 d = q - qp;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return std::sqrt(pot.A().quad(d));
}

double degenerate_separation(const GaussianPotential& pot) { return 1e-8 * (pot.l1() + pot.l2()); }

double straight_line_potential_integral(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t) {
  if (!(t > 0.0)) throw InvalidArgument("straight_line_potential_integral: t must be positive");
  if (pot.v0() == 0.0) return 0.0;

  const Vec2 d = q - qp;
  if (norm(d) < degenerate_separation(pot)) {
    return t * pot(0.5 * (q + qp));
  }
  const SymMat2& A = pot.A();
  const Vec2 Ad = A * d;
  const double gap = std::sqrt(dot(d, Ad));
  // erf arguments q.Ad/gap and q'.Ad/gap: their mean, and half their
  // difference, which is exactly gap/2.
  const Vec2 mid = 0.5 * (q + qp);
  const double centre = dot(mid, Ad) / gap;
  // q x q' == m x (q - q') for the midpoint m, without cancelling two
  // nearly equal products when q' is close to q; also odd under the swap.
  const double c = cross(mid, d);
  const double gauss = std::exp(-(c * c) * A.det() / (gap * gap));
  return kSqrtPi * pot.v0() * t / (2.0 * gap) * gauss * erf_difference(centre, 0.5 * gap);
}

IdentitySides check_vector_identity(const SymMat2& A, Vec2 q, Vec2 qp) {
  const double qAq = A.quad(q);
  const double pAp = A.quad(qp);
  const double qAp = dot(q, A * qp);
  const double c = cross(q, qp);
  return {qAq * pAp - qAp * qAp, c * c * A.det()};
}

}  // namespace qlens
