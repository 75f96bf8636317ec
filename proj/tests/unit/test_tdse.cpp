#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "oracles.hpp"
#include "qlens/bessel.hpp"
#include "qlens/errors.hpp"
#include "qlens/gaussian_packet.hpp"
#include "qlens/observables.hpp"
#include "qlens/tdse/chebyshev.hpp"
#include "qlens/tdse/hamiltonian.hpp"
#include "qlens/tdse/propagation.hpp"
#include "qlens/tdse/snapshot_io.hpp"
#include "qlens/tdse/splitstep.hpp"

using namespace qlens;
using namespace qlens::tdse;

namespace {

const GaussianPotential kIsland(10.0, {1.0, 0.0}, 100.0, 1.0);

GridSpec small_grid() {
  GridSpec g;
  g.x1_min = -1.6;
  g.x1_max = 1.6;
  g.x2_min = -1.0;
  g.x2_max = 1.0;
  g.n1 = 256;
  g.n2 = 128;
  return g;
}

// Launch close to the island so short runs on the small grid still cross it.
PacketParams near_packet() {
  PacketParams p;
  p.q_launch = -0.5;
  return p;
}

double max_abs(const ComplexField2D& f) {
  double m = 0.0;
  for (const cplx& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("plane wave is an eigenvector of the free Hamiltonian") {
  // FFT roundoff is relative to the largest kinetic value on the grid, so
  // the eigenvalue is checked on a coarse 2 pi box (cutoff 1024) at 1e-12
  // and on the run grid against its own cutoff.
  GridSpec box;
  box.x1_min = box.x2_min = 0.0;
  box.x1_max = box.x2_max = 2.0 * std::numbers::pi;
  box.n1 = box.n2 = 64;
  const GaussianPotential flat = kIsland.with_v0(0.0);
  for (const bool coarse : {true, false}) {
    const GridSpec g = coarse ? box : small_grid();
    const double cutoff = Hamiltonian(flat, g).kinetic_cutoff();
    for (const auto& [a, b] : {std::pair{3, -2}, std::pair{19, 0}, std::pair{-30, 11}}) {
      const double k1 = 2.0 * std::numbers::pi * a / (g.x1_max - g.x1_min);
      const double k2 = 2.0 * std::numbers::pi * b / (g.x2_max - g.x2_min);
      ComplexField2D psi(g);
      for (std::size_t j = 0; j < g.n2; ++j)
        for (std::size_t i = 0; i < g.n1; ++i) psi(i, j) = std::exp(cplx(0.0, k1 * g.x1(i) + k2 * g.x2(j)));
      const ComplexField2D h = apply_hamiltonian(flat, psi);
      const double e = 0.5 * (k1 * k1 + k2 * k2);
      double worst = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) worst = std::max(worst, std::abs(h.values()[n] - e * psi.values()[n]));
      CAPTURE(a);
      CAPTURE(b);
      if (coarse) CHECK(worst <= 1e-12 * e);
      CHECK(worst <= 1e-14 * cutoff);
    }
  }
}

TEST_CASE("constant field has zero free energy") {
  ComplexField2D psi(small_grid());
  for (cplx& v : psi.values()) v = cplx(0.3, -0.7);
  const ComplexField2D h = apply_hamiltonian(kIsland.with_v0(0.0), psi);
  CHECK(max_abs(h) <= 1e-12);
}

TEST_CASE("initial packet energy against moment integrals") {
  const PacketParams p;
  GridSpec g;  // default run grid
  for (double v0 : {0.0, 10.0, 40.0}) {
    const GaussianPotential pot = kIsland.with_v0(v0);
    const ComplexField2D psi = synthesize_packet(pot, p, g);
    const Hamiltonian h(pot, g);
    // Kinetic: carrier plus one quarter hbar^2/(m sigma0^2) per axis.
    const double kinetic = p.kinetic_energy() + 2.0 * p.hbar * p.hbar / (4.0 * p.m * p.sigma0 * p.sigma0);
    // Potential: int |psi|^2 V by nested quadrature over +-10 sigma0.
    const double s = p.sigma0;
    auto density = [&](double x, double y) {
      return std::exp(-((x - p.q_launch) * (x - p.q_launch) + y * y) / (s * s)) / (std::numbers::pi * s * s);
    };
    const double potential = oracle::integrate(
        [&](double x) {
          return oracle::integrate([&](double y) { return density(x, y) * pot({x, y}); }, -10 * s, 10 * s, 1e-13);
        },
        p.q_launch - 10 * s, p.q_launch + 10 * s, 1e-13);
    const double e = energy_expectation(h, psi);
    CAPTURE(v0);
    CHECK(e == doctest::Approx(kinetic + potential).epsilon(1e-8));
    if (v0 == 0.0) CHECK(e == doctest::Approx(1850.0).epsilon(1e-3));
  }
}

TEST_CASE("Bessel sequence against the standard library") {
  for (double x : {0.0, 0.3, 1.0, 7.5, 10.5, 50.0, 210.0}) {
    const int top = static_cast<int>(x) + 80;
    const auto j = bessel_j_sequence(x, top);
    REQUIRE(j.size() == static_cast<std::size_t>(top + 1));
    for (int k = 0; k <= top; ++k) {
      const double ref = std::cyl_bessel_j(static_cast<double>(k), x);
      CAPTURE(x);
      CAPTURE(k);
      CHECK(std::abs(j[k] - ref) <= 1e-13 + 1e-9 * std::abs(ref));
    }
  }
}

TEST_CASE("Chebyshev plan: term counts and guards") {
  const GridSpec g;
  SUBCASE("short steps need few terms") {
    CHECK(plan_chebyshev(kIsland, g, 1e-7, 1e-12).n_terms <= 15);
  }
  SUBCASE("argument 50: last significant Bessel order plus ten") {
    const double e_max = 100.0;
    const double dt = 50.0 / (0.5 * 1.1 * e_max);
    const ChebyshevPlan plan = plan_chebyshev_bounds(0.0, e_max, dt, 1e-12);
    CHECK(plan.argument == doctest::Approx(50.0).epsilon(1e-14));
    int last = 200;
    while (std::abs(std::cyl_bessel_j(static_cast<double>(last), 50.0)) < 1e-12) --last;
    CHECK(plan.n_terms == last + 11);
    CHECK(plan.n_terms > 50);
    CHECK(plan.n_terms - 50 <= 10 + 10 * std::cbrt(50.0));
  }
  SUBCASE("doubling dt roughly doubles the count") {
    const int a = plan_chebyshev(kIsland, g, 0.005, 1e-12).n_terms;
    const int b = plan_chebyshev(kIsland, g, 0.01, 1e-12).n_terms;
    CHECK(static_cast<double>(b) / a == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("bounds and coefficients") {
    const ChebyshevPlan plan = plan_chebyshev(kIsland.with_v0(-5.0), g, 2.5e-4, 1e-12);
    const double kin = std::numbers::pi * std::numbers::pi / 2.0 * (1.0 / (g.d1() * g.d1()) + 1.0 / (g.d2() * g.d2()));
    CHECK(plan.e_min == doctest::Approx(-5.0 - 0.05 * (kin + 5.0)).epsilon(1e-14));
    CHECK(plan.e_max == doctest::Approx(kin + 0.05 * (kin + 5.0)).epsilon(1e-14));
    CHECK(plan.coefficients.size() == static_cast<std::size_t>(plan.n_terms));
    const cplx phase = std::exp(cplx(0.0, -plan.center * plan.dt));
    for (int k = 0; k < plan.n_terms; ++k) {
      const cplx expected = phase * std::pow(cplx(0.0, -1.0), k) * (k ? 2.0 : 1.0) *
                            std::cyl_bessel_j(static_cast<double>(k), plan.argument);
      CHECK(std::abs(plan.coefficients[k] - expected) <= 1e-14);
    }
  }
  SUBCASE("invalid requests") {
    CHECK_THROWS_AS(plan_chebyshev(kIsland, g, 0.0, 1e-12), InvalidArgument);
    CHECK_THROWS_AS(plan_chebyshev(kIsland, g, 1e-3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(plan_chebyshev(kIsland, g, 1e-3, 1e-5), InvalidArgument);
    CHECK_THROWS_AS(plan_chebyshev(kIsland, g, 1e-3, 1e-300), PlanningError);
  }
}

TEST_CASE("sample schedule") {
  const auto s = sample_schedule(0.0032, 1e-3);
  REQUIRE(s.size() == 5);
  CHECK(s.front() == 0.0);
  CHECK(s[2] == doctest::Approx(2e-3));
  CHECK(s.back() == 0.0032);
  CHECK(sample_schedule(0.003, 1e-3).size() == 4);
}

TEST_CASE("free run on the default grid: spreading, Ehrenfest, norm") {
  const PacketParams p;
  const GridSpec g;
  const GaussianPotential flat = kIsland.with_v0(0.0);
  PropagationSettings s;
  s.sample_times = sample_schedule(0.03, 1e-3);
  s.keep_fields = false;
  std::vector<double> width, q1, q2;
  const auto snaps = propagate_chebyshev(flat, synthesize_packet(flat, p, g), s,
                                         [&](double, const ComplexField2D& f) {
                                           width.push_back(sigma2(f));
                                           const Vec2 m = mean_position(f);
                                           q1.push_back(m.x);
                                           q2.push_back(m.y);
                                         });
  REQUIRE(snaps.size() == s.sample_times.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const double t = snaps[k].t;
    CAPTURE(t);
    CHECK(std::abs(width[k] - sigma2_free(p, t)) <= 2e-3 * sigma2_free(p, t));
    CHECK(std::abs(q1[k] - (p.q_launch + p.v * t)) <= 1e-6);
    CHECK(std::abs(q2[k]) <= 1e-10);
    CHECK(std::abs(snaps[k].norm - 1.0) <= 1e-10);
  }
}

TEST_CASE("island run on the default grid: symmetry, norm, energy") {
  const PacketParams p;
  const GridSpec g;
  const GaussianPotential pot = kIsland.with_v0(40.0);
  const ComplexField2D psi0 = synthesize_packet(pot, p, g);
  const Hamiltonian h(pot, g);
  const double e0 = energy_expectation(h, psi0);
  PropagationSettings s;
  s.sample_times = sample_schedule(0.032, 8e-3);
  const auto snaps = propagate_chebyshev(pot, psi0, s);
  for (const Snapshot& snap : snaps) {
    CAPTURE(snap.t);
    CHECK(std::abs(snap.norm - 1.0) <= 1e-10);
    const ComplexField2D& f = snap.field;
    // q2 -> -q2 maps row j onto row n2 - j (row 0 is its own image).
    double worst = 0.0;
    for (std::size_t j = 1; j < g.n2; ++j)
      for (std::size_t i = 0; i < g.n1; ++i)
        worst = std::max(worst, std::abs(std::abs(f(i, j)) - std::abs(f(i, g.n2 - j))));
    CHECK(worst <= 1e-9);
    CHECK(std::abs(mean_position(f).y) <= 1e-10);
    CHECK(std::abs(energy_expectation(h, f) - e0) <= 1e-8 * e0);
  }
}

TEST_CASE("Chebyshev result does not depend on the step") {
  const GridSpec g = small_grid();
  const PacketParams p = near_packet();
  const GaussianPotential pot = kIsland.with_v0(40.0);
  const ComplexField2D psi0 = synthesize_packet(pot, p, g);
  auto run = [&](double dt) {
    PropagationSettings s;
    s.dt = dt;
    s.sample_times = {0.0, 0.01};
    return propagate_chebyshev(pot, psi0, s).back().field;
  };
  const ComplexField2D ref = run(2.5e-4);
  CHECK(l2_distance(run(1e-3), ref) <= 1e-8);
  CHECK(l2_distance(run(5e-3), ref) <= 1e-8);
  CHECK(l2_distance(run(1.7e-4), ref) <= 1e-8);
}

TEST_CASE("split-step: exact without potential, second order with it, agrees with Chebyshev") {
  const GridSpec g = small_grid();
  const PacketParams p = near_packet();
  // Sampled once the packet has left the island (centre at q1 = 0.58): while
  // it overlaps V the Strang state carries an extra dt^2 term that mostly
  // cancels on exit.
  const double t = 0.018;
  auto split = [&](const GaussianPotential& pot, double dt) {
    PropagationSettings s;
    s.dt = dt;
    s.sample_times = {0.0, t};
    return propagate_splitstep(pot, synthesize_packet(pot, p, g), s).back().field;
  };
  auto cheb = [&](const GaussianPotential& pot) {
    PropagationSettings s;
    s.sample_times = {0.0, t};
    return propagate_chebyshev(pot, synthesize_packet(pot, p, g), s).back().field;
  };

  const GaussianPotential flat = kIsland.with_v0(0.0);
  const ComplexField2D free_ref = cheb(flat);
  CHECK(l2_distance(split(flat, 1e-3), free_ref) <= 1e-10);
  CHECK(l2_distance(split(flat, 1e-3), split(flat, 2.5e-4)) <= 1e-11);

  const GaussianPotential pot = kIsland.with_v0(40.0);
  const ComplexField2D ref = cheb(pot);
  const double e1 = l2_distance(split(pot, 4e-5), ref);
  const double e2 = l2_distance(split(pot, 2e-5), ref);
  const double e3 = l2_distance(split(pot, 1e-5), ref);
  MESSAGE("split-step errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e3 <= 1e-8);
}

TEST_CASE("grid doubling leaves the final width unchanged") {
  const PacketParams p;
  const GaussianPotential pot = kIsland.with_v0(40.0);
  auto width = [&](const GridSpec& g) {
    PropagationSettings s;
    s.dt = 1e-3;
    s.sample_times = {0.0, 0.032};
    s.keep_fields = true;
    return sigma2(propagate_chebyshev(pot, synthesize_packet(pot, p, g), s).back().field);
  };
  GridSpec coarse;
  GridSpec fine = coarse;
  fine.n1 *= 2;
  fine.n2 *= 2;
  const double a = width(coarse), b = width(fine);
  MESSAGE("sigma2 " << a << " vs " << b);
  CHECK(std::abs(a - b) <= 5e-4 * b);
}

TEST_CASE("boundary contact aborts both engines") {
  GridSpec g = small_grid();
  g.x1_max = 0.2;
  g.n1 = 128;
  const PacketParams p = near_packet();
  const ComplexField2D psi0 = synthesize_packet(kIsland, p, g);
  PropagationSettings s;
  s.sample_times = sample_schedule(0.02, 1e-3);
  try {
    (void)propagate_chebyshev(kIsland, psi0, s);
    FAIL("expected BoundaryContaminationError");
  } catch (const BoundaryContaminationError& e) {
    CHECK(e.edge_mass() > s.boundary_limit);
  }
  s.dt = 1e-4;
  CHECK_THROWS_AS(propagate_splitstep(kIsland, psi0, s), BoundaryContaminationError);
}

TEST_CASE("snapshot files round-trip") {
  const GridSpec g = small_grid();
  const ComplexField2D psi = synthesize_packet(kIsland, near_packet(), g);
  const auto dir = std::filesystem::temp_directory_path() / "qlens_test_snapshots";
  std::filesystem::create_directories(dir);
  const auto path = dir / "psi.bin";
  write_snapshot_with_sidecar(path, psi, 0.012, "chebyshev", 10.0);
  const ComplexField2D back = read_snapshot(path);
  CHECK(back.grid() == g);
  CHECK(std::equal(back.values().begin(), back.values().end(), psi.values().begin()));
  CHECK(std::filesystem::file_size(path) == 16 + 32 + 16 * g.size());

  std::ifstream side(path.string() + ".json");
  const auto j = nlohmann::json::parse(side);
  CHECK(j.at("t").get<double>() == 0.012);
  CHECK(j.at("engine").get<std::string>() == "chebyshev");

  std::ofstream(dir / "bad.bin") << "short";
  CHECK_THROWS_AS(read_snapshot(dir / "bad.bin"), Error);
  CHECK_THROWS_AS(read_snapshot(dir / "missing.bin"), Error);
  std::filesystem::remove_all(dir);
}
