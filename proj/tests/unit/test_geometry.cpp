#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qlens/errors.hpp"
#include "qlens/potential.hpp"

using namespace qlens;

namespace {

const GaussianPotential kIsland(10.0, {1.0, 0.0}, 100.0, 1.0);

SymMat2 random_spd(std::mt19937_64& rng, double& a1, double& a2, Vec2& e1) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> log_eig(std::log(0.1), std::log(100.0));
  const double th = angle(rng);
  e1 = {std::cos(th), std::sin(th)};
  a1 = std::exp(log_eig(rng));
  a2 = std::exp(log_eig(rng));
  return build_matrix_A(e1, a1, a2);
}

}  // namespace

TEST_CASE("build_matrix_A: aligned, rotated and isotropic cases") {
  const SymMat2 a = build_matrix_A({1.0, 0.0}, 100.0, 1.0);
  CHECK(a.xx == 100.0);
  CHECK(a.xy == 0.0);
  CHECK(a.yy == 1.0);

  const double r = 1.0 / std::sqrt(2.0);
  const SymMat2 b = build_matrix_A({r, r}, 2.0, 4.0);
  CHECK(b.xx == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(b.xy == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(b.yy == doctest::Approx(3.0).epsilon(1e-14));

  const SymMat2 c = build_matrix_A({0.6, 0.8}, 5.0, 5.0);
  CHECK(c.xx == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(std::abs(c.xy) < 1e-14);
  CHECK(c.yy == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("build_matrix_A rejects bad input") {
  CHECK_THROWS_AS(build_matrix_A({1.0, 0.0}, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_matrix_A({1.0, 0.0}, 1.0, -2.0), InvalidArgument);
  CHECK_THROWS_AS(build_matrix_A({1.0, 0.1}, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("A has the requested eigenpairs and determinant") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    double a1, a2;
    Vec2 e1;
    const SymMat2 A = random_spd(rng, a1, a2, e1);
    const Vec2 e2 = perp(e1);
    CHECK(std::abs(dot(e1, e2)) < 1e-12);
    CHECK(std::abs(norm(e2) - 1.0) < 1e-12);
    const Vec2 r1 = A * e1 - a1 * e1;
    const Vec2 r2 = A * e2 - a2 * e2;
    CHECK(norm(r1) <= 1e-12 * std::max(a1, a2));
    CHECK(norm(r2) <= 1e-12 * std::max(a1, a2));
    CHECK(std::abs(A.det() - a1 * a2) <= 1e-12 * a1 * a2);
  }
}

TEST_CASE("eval_potential examples") {
  CHECK(eval_potential(kIsland, {0.0, 0.0}) == 10.0);
  CHECK(eval_potential(kIsland, {0.1, 0.0}) == doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-14));
  double prev = kIsland({0.0, 0.0});
  for (double s = 0.05; s < 3.0; s *= 1.5) {
    const double v = kIsland({0.3 * s, 0.7 * s});
    CHECK(v < prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(kIsland({50.0, 50.0}) == 0.0);
}

TEST_CASE("gradient matches central differences") {
  const Vec2 q{0.04, 0.3};
  const double h = 1e-6;
  const Vec2 g = kIsland.gradient(q);
  const double gx = (kIsland(q + Vec2{h, 0}) - kIsland(q - Vec2{h, 0})) / (2 * h);
  const double gy = (kIsland(q + Vec2{0, h}) - kIsland(q - Vec2{0, h})) / (2 * h);
  CHECK(g.x == doctest::Approx(gx).epsilon(1e-7));
  CHECK(g.y == doctest::Approx(gy).epsilon(1e-7));
}

TEST_CASE("quadratic_gap examples") {
  CHECK(quadratic_gap(kIsland, {0.3, 0.2}, {0.3, 0.2}) == 0.0);
  CHECK(quadratic_gap(kIsland, {0.8, 0.0}, {-0.8, 0.0}) == doctest::Approx(16.0).epsilon(1e-14));
  const GaussianPotential iso(1.0, {1.0, 0.0}, 1.0, 1.0);
  CHECK(quadratic_gap(iso, {1.0, 2.0}, {-2.0, -2.0}) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("straight_line_potential_integral examples") {
  const double v = straight_line_potential_integral(kIsland, {0.8, 0.0}, {-0.8, 0.0}, 0.01);
  const double expected = std::sqrt(std::numbers::pi) * 10.0 * 0.01 * 0.1 / 1.6 * std::erf(8.0);
  CHECK(v == doctest::Approx(expected).epsilon(1e-13));
  CHECK(v == doctest::Approx(0.0110778).epsilon(1e-5));
  CHECK(std::abs(v - oracle::line_integral(kIsland, {0.8, 0.0}, {-0.8, 0.0}, 0.01)) <= 1e-12 * v);

  const GaussianPotential flat = kIsland.with_v0(0.0);
  CHECK(straight_line_potential_integral(flat, {0.3, 0.1}, {-0.5, 0.2}, 0.02) == 0.0);
  CHECK(straight_line_potential_integral(kIsland, {0.0, 0.0}, {0.0, 0.0}, 0.01) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(straight_line_potential_integral(kIsland, {0, 0}, {1, 0}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(straight_line_potential_integral(kIsland, {0, 0}, {1, 0}, -1.0), InvalidArgument);
}

TEST_CASE("closed form agrees with direct quadrature over random geometries") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> strength(-40.0, 40.0);
  std::uniform_real_distribution<double> time(0.001, 0.05);
  double worst = 0.0;
  int tested = 0;
  while (tested < 200) {
    double a1, a2;
    Vec2 e1;
    random_spd(rng, a1, a2, e1);
    const GaussianPotential pot(strength(rng), e1, a1, a2);
    const Vec2 q{coord(rng), coord(rng)}, qp{coord(rng), coord(rng)};
    if (quadratic_gap(pot, q, qp) < 1e-6) continue;
    const double t = time(rng);
    const double closed = straight_line_potential_integral(pot, q, qp, t);
    const double quad = oracle::line_integral(pot, q, qp, t);
    if (quad == 0.0) continue;
    worst = std::max(worst, std::abs(closed - quad) / std::abs(quad));
    ++tested;
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("closed form stays accurate for short and far-off-axis segments") {
  // erf arguments of equal sign and large magnitude, and nearly coincident
  // endpoints, are where naive erf(u) - erf(u') cancels.
  const Vec2 cases[][2] = {{{0.5, 0.05}, {0.9, 0.05}},
                           {{-0.9, 0.2}, {-0.4, 0.2}},
                           {{0.05, 0.3}, {0.0501, 0.3}},
                           {{0.2, 0.0}, {0.2, 1e-5}}};
  for (const auto& c : cases) {
    const double closed = straight_line_potential_integral(kIsland, c[0], c[1], 0.01);
    const double quad = oracle::line_integral(kIsland, c[0], c[1], 0.01);
    CHECK(std::abs(closed - quad) <= 1e-10 * std::abs(quad));
  }
}

TEST_CASE("degenerate branch is continuous in every direction") {
  for (const Vec2 q : {Vec2{0.0, 0.0}, Vec2{0.03, 0.2}, Vec2{-0.1, -0.5}}) {
    for (int k = 0; k < 8; ++k) {
      const double th = k * std::numbers::pi / 4.0;
      const Vec2 qp = q + 1e-4 * Vec2{std::cos(th), std::sin(th)};
      const double near = straight_line_potential_integral(kIsland, q, qp, 0.01);
      const double mid = 0.01 * kIsland(0.5 * (q + qp));
      CHECK(std::abs(near - mid) <= 1e-6 * mid);
      // Straddling the switch-over separation.
      const Vec2 u = 1e4 * (qp - q);
      const double sep = degenerate_separation(kIsland);
      const Vec2 qa = q + 2.0 * sep * u, qb = q + 0.5 * sep * u;
      const double above = straight_line_potential_integral(kIsland, q, qa, 0.01);
      const double below = straight_line_potential_integral(kIsland, q, qb, 0.01);
      CHECK(std::abs(above - 0.01 * kIsland(0.5 * (q + qa))) <= 1e-9 * above);
      CHECK(below == 0.01 * kIsland(0.5 * (q + qb)));
    }
  }
  // At the centre the gradient vanishes, so t V(q) itself is approached.
  const double at_centre = straight_line_potential_integral(kIsland, {0, 0}, {1e-4, 0}, 0.01);
  CHECK(std::abs(at_centre - 0.1) <= 1e-6 * 0.1);
}

TEST_CASE("line integral is symmetric under endpoint swap") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const Vec2 q{coord(rng), coord(rng)}, qp{coord(rng), coord(rng)};
    CHECK(straight_line_potential_integral(kIsland, q, qp, 0.02) ==
          straight_line_potential_integral(kIsland, qp, q, 0.02));
  }
}

TEST_CASE("check_vector_identity examples") {
  const SymMat2 I{1.0, 0.0, 1.0};
  auto s = check_vector_identity(I, {1, 0}, {0, 1});
  CHECK(s.lhs == 1.0);
  CHECK(s.rhs == 1.0);
  s = check_vector_identity(SymMat2{2.0, 0.0, 3.0}, {1, 1}, {1, -1});
  CHECK(s.lhs == doctest::Approx(24.0));
  CHECK(s.rhs == doctest::Approx(24.0));
  s = check_vector_identity(SymMat2{2.0, 0.5, 3.0}, {0.4, -1.2}, {-0.8, 2.4});
  CHECK(std::abs(s.lhs) < 1e-14);
  CHECK(s.rhs == 0.0);
}

TEST_CASE("vector identity holds for 1000 random SPD matrices") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double a1, a2;
    Vec2 e1;
    const SymMat2 A = random_spd(rng, a1, a2, e1);
    const Vec2 q{coord(rng), coord(rng)}, qp{coord(rng), coord(rng)};
    const auto s = check_vector_identity(A, q, qp);
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-10 * std::max(1.0, std::abs(s.lhs)));
  }
}
