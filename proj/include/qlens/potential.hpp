#pragma once

#include "qlens/linalg.hpp"

namespace qlens {

/// Builds A = (e1 e2) diag(a1, a2) (e1 e2)^T with e2 the +90 degree
/// rotation of e1. Throws InvalidArgument for non-positive a1/a2 or a
/// non-unit e1 (tolerance 1e-12).
SymMat2 build_matrix_A(Vec2 e1, double a1, double a2);

/// Gaussian island V(q) = V0 exp(-q.Aq) centred at the origin.
///
/// Stores the principal axis e1 and the inverse squared lengths a1, a2;
/// e2 and A are derived. Values are immutable once constructed.
class GaussianPotential {
 public:
  GaussianPotential(double v0, Vec2 e1, double a1, double a2);

  /// Convenience constructor from the island lengths l1 = 1/sqrt(a1),
  /// l2 = 1/sqrt(a2).
  static GaussianPotential from_lengths(double v0, Vec2 e1, double l1, double l2);

  double v0() const { return v0_; }
  Vec2 e1() const { return e1_; }
  Vec2 e2() const { return perp(e1_); }
  double a1() const { return a1_; }
  double a2() const { return a2_; }
  double l1() const { return 1.0 / std::sqrt(a1_); }
  double l2() const { return 1.0 / std::sqrt(a2_); }
  const SymMat2& A() const { return A_; }

  GaussianPotential with_v0(double v0) const { return {v0, e1_, a1_, a2_}; }

  double operator()(Vec2 q) const { return v0_ * std::exp(-A_.quad(q)); }
  /// grad V = -2 V(q) A q
  Vec2 gradient(Vec2 q) const;

 private:
  double v0_;
  Vec2 e1_;
  double a1_;
  double a2_;
  SymMat2 A_;
};

inline double eval_potential(const GaussianPotential& pot, Vec2 q) { return pot(q); }

/// sqrt((q-q').A(q-q')); exactly 0 when q == q'.
double quadratic_gap(const GaussianPotential& pot, Vec2 q, Vec2 qp);

/// Separation below which the straight-line integral is replaced by its
/// limit t V((q+q')/2): 1e-8 (l1 + l2).
double degenerate_separation(const GaussianPotential& pot);

/// Closed form of int_0^t V(q' + (tau/t)(q - q')) dtau. Symmetric in
/// (q, q') bit for bit. Throws InvalidArgument for t <= 0.
double straight_line_potential_integral(const GaussianPotential& pot, Vec2 q, Vec2 qp, double t);

struct IdentitySides {
  double lhs;
  double rhs;
};

/// (q.Aq)(q'.Aq') - (q.Aq')^2 against |q x q'|^2 det A.
IdentitySides check_vector_identity(const SymMat2& A, Vec2 q, Vec2 qp);

}  // namespace qlens
