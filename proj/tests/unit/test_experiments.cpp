#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qlens/config.hpp"
#include "qlens/errors.hpp"
#include "qlens/experiment.hpp"
#include "qlens/gaussian_packet.hpp"
#include "qlens/lens.hpp"
#include "qlens/observables.hpp"

using namespace qlens;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small, fast configuration: near launch, short run, coarse grid.
RunConfig small_config(const fs::path& dir) {
  RunConfig c;
  c.packet.q_launch = -0.5;
  c.grid.x1_min = -1.6;
  c.grid.x1_max = 1.6;
  c.grid.x2_min = -1.0;
  c.grid.x2_max = 1.0;
  c.grid.n1 = 256;
  c.grid.n2 = 128;
  c.time.t_final = 0.018;
  c.time.snapshot_interval = 2e-3;
  c.engines = {Engine::chebyshev, Engine::lens};
  c.sweep = {10.0, 40.0};
  c.output.dir = dir.string();
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qlens_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("sigma2 of synthesized states") {
  const PacketParams p;
  const GaussianPotential pot(10.0, {1.0, 0.0}, 100.0, 1.0);
  GridSpec g;
  g.n1 = 256;
  g.n2 = 128;
  const ComplexField2D psi = synthesize_packet(pot, p, g);
  CHECK(sigma2(psi) == doctest::Approx(0.1).epsilon(1e-3));

  // Shifting along q1 by whole cells leaves the q2 marginal alone.
  ComplexField2D shifted(g);
  for (std::size_t j = 0; j < g.n2; ++j)
    for (std::size_t i = 0; i < g.n1; ++i) shifted((i + 17) % g.n1, j) = psi(i, j);
  CHECK(sigma2(shifted) == doctest::Approx(sigma2(psi)).epsilon(1e-14));

  // Transverse profile of the free state at t = 0.02.
  const double t = 0.02;
  const cplx rho = p.rho2() + p.v * t;
  ComplexField2D later(g);
  for (std::size_t j = 0; j < g.n2; ++j)
    for (std::size_t i = 0; i < g.n1; ++i)
      later(i, j) = packet_factor_longitudinal(p, g.x1(i) - 0.4, p.rho1() + p.v * t) *
                    packet_factor_transverse(p, g.x2(j), rho);
  CHECK(sigma2(later) == doctest::Approx(0.223607).epsilon(1e-3));

  CHECK_THROWS_AS(sigma2(ComplexField2D(g)), NonNormalizableState);
}

TEST_CASE("sigma2_free and delta_sigma2") {
  const PacketParams p;
  CHECK(sigma2_free(p, 0.0) == doctest::Approx(0.1).epsilon(1e-15));
  for (double t : {0.003, 0.017, 0.032}) {
    CHECK(sigma2_free(p, t) == doctest::Approx(std::sqrt(0.01 + t * t / 0.01)).epsilon(1e-14));
  }
  CHECK(sigma2_free(p, 0.02) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-15));
  CHECK(sigma2_free(p, 0.02) == doctest::Approx(0.223607).epsilon(1e-6));
  CHECK(sigma2_free(p, 1e4) / (1e4 / 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(delta_sigma2(0.3, 0.25) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("engine names") {
  for (Engine e : {Engine::chebyshev, Engine::splitstep, Engine::eikonal, Engine::lens})
    CHECK(parse_engine(to_string(e)) == e);
  CHECK_FALSE(parse_engine("euler").has_value());
}

TEST_CASE("config: defaults, JSON round trip, overrides, hash") {
  const RunConfig d;
  CHECK(d.potential.v0 == 10.0);
  CHECK(d.potential.a1 == 100.0);
  CHECK(d.packet.q_launch == -0.8);
  CHECK(d.time.t_final == 0.032);
  CHECK(d.time.snapshot_interval == 1e-3);
  CHECK(d.eikonal.receivers == 256);
  CHECK(d.v0_values() == std::vector<double>{10.0});
  CHECK_NOTHROW(d.validate());

  RunConfig c = small_config("somewhere");
  c.engines = {Engine::lens, Engine::eikonal};
  const auto j = config_to_json(c);
  const RunConfig back = config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(config_to_json(back).dump() == j.dump());
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash_hex(c).size() == 16);

  RunConfig other = c;
  other.packet.sigma0 = 0.11;
  CHECK(config_hash(other) != config_hash(c));

  nlohmann::json raw = nlohmann::json::object();
  apply_override(raw, "potential.v0=25");
  apply_override(raw, "sweep=[10,20]");
  apply_override(raw, "output.prefix=fig2");
  apply_override(raw, "engines=[\"lens\"]");
  const RunConfig o = config_from_json(raw);
  CHECK(o.potential.v0 == 25.0);
  CHECK(o.v0_values() == std::vector<double>{10.0, 20.0});
  CHECK(o.output.prefix == "fig2");
  CHECK(o.engines == std::vector<Engine>{Engine::lens});
  CHECK_THROWS_AS(apply_override(raw, "no-equals-sign"), ConfigurationError);
}

TEST_CASE("config: invalid input is rejected") {
  auto bad = [](const std::string& assignment) {
    return load_config(std::nullopt, {assignment});
  };
  CHECK_THROWS_AS(bad("packet.sigma0=-0.1"), ConfigurationError);
  CHECK_THROWS_AS(bad("packet.q_launch=0.8"), ConfigurationError);
  CHECK_THROWS_AS(bad("potential.a2=0"), ConfigurationError);
  CHECK_THROWS_AS(bad("potential.colour=3"), ConfigurationError);
  CHECK_THROWS_AS(bad("engines=[\"euler\"]"), ConfigurationError);
  CHECK_THROWS_AS(bad("engines=[\"lens\",\"lens\"]"), ConfigurationError);
  CHECK_THROWS_AS(bad("sweep=[10,10]"), ConfigurationError);
  CHECK_THROWS_AS(bad("grid.n1=300"), ConfigurationError);
  CHECK_THROWS_AS(bad("solver.tol=1e-3"), ConfigurationError);
  CHECK_THROWS_AS(bad("time.dt=\"fast\""), ConfigurationError);
  CHECK_THROWS_AS(load_config(fs::path("/nonexistent/qlens.json")), ConfigurationError);

  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  write_text_file(dir / "c.json", R"({"potential": {"v0": 30}, "engine": "lens"})");
  const RunConfig c = load_config(dir / "c.json", {"time.t_final=0.02"});
  CHECK(c.potential.v0 == 30.0);
  CHECK(c.engines == std::vector<Engine>{Engine::lens});
  CHECK(c.time.t_final == 0.02);
  write_text_file(dir / "broken.json", "{\"potential\": ");
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigurationError);
  fs::remove_all(dir);
}

TEST_CASE("CSV layout") {
  const std::vector<ResultRow> rows = {{0.001, Engine::lens, 10.0, 0.1 + 1e-17, 0.1, 1e-17},
                                       {1.0 / 3.0, Engine::chebyshev, 40.0, 0.2, 0.19, 0.01}};
  const std::string csv = format_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,engine,v0,sigma2,sigma2_free,delta_sigma2");
  std::getline(in, line);
  CHECK(line.rfind("0.001,lens,10,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("0.33333333333333331,chebyshev,40,", 0) == 0);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("lens engine: free limit, ordering, early flatness") {
  RunConfig c;
  c.engines = {Engine::lens};
  const auto flat = run_single(c, Engine::lens, 0.0);
  REQUIRE(flat.size() == 33);
  for (const ResultRow& r : flat) CHECK(r.delta_sigma2 == 0.0);

  const auto weak = run_single(c, Engine::lens, 10.0);
  const auto strong = run_single(c, Engine::lens, 40.0);
  for (std::size_t k = 0; k < weak.size(); ++k) {
    CHECK(weak[k].delta_sigma2 == weak[k].sigma2 - weak[k].sigma2_free);
    if (weak[k].t > 0.015) CHECK(strong[k].delta_sigma2 > weak[k].delta_sigma2);
    if (weak[k].t <= 0.012) CHECK(std::abs(strong[k].delta_sigma2) <= 0.02 * strong[k].sigma2_free);
  }
}

TEST_CASE("grid engines agree and vanish without an island") {
  const fs::path dir = scratch("engines");
  RunConfig c = small_config(dir);
  const auto cheb = run_single(c, Engine::chebyshev, 40.0);
  const auto split = run_single(c, Engine::splitstep, 40.0);
  REQUIRE(cheb.size() == split.size());
  for (std::size_t k = 0; k < cheb.size(); ++k) {
    CHECK(cheb[k].t == split[k].t);
    CHECK(std::abs(cheb[k].sigma2 - split[k].sigma2) <= 1e-6);
  }
  for (const ResultRow& r : run_single(c, Engine::chebyshev, 0.0)) {
    CHECK(std::abs(r.delta_sigma2) <= 2e-3 * r.sigma2);
  }
}

TEST_CASE("experiment outputs are complete and deterministic") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  RunConfig ca = small_config(a);
  RunConfig cb = small_config(b);
  const RunResult ra = run_experiment(ca);
  const RunResult rb = run_experiment(cb);
  CHECK(ra.failures.empty());
  REQUIRE(ra.rows.size() == 2 * 2 * 10);
  CHECK(ra.rows.front().v0 == 10.0);
  CHECK(ra.rows.front().engine == Engine::chebyshev);
  CHECK(format_csv(ra.rows) == format_csv(rb.rows));

  const OutputFiles fa = write_outputs(ca, ra);
  const OutputFiles fb = write_outputs(cb, rb);
  CHECK(fa.per_run.size() == 4);
  CHECK(fa.per_run[0].filename() == "run_chebyshev_v0_10.csv");
  CHECK(fa.merged.filename() == "run_sweep.csv");
  CHECK(slurp(fa.merged) == slurp(fb.merged));
  for (std::size_t k = 0; k < fa.per_run.size(); ++k) CHECK(slurp(fa.per_run[k]) == slurp(fb.per_run[k]));

  const auto prov = nlohmann::json::parse(slurp(fa.provenance));
  CHECK(prov.contains("config_hash"));
  CHECK(prov.contains("simd"));
  CHECK(prov.contains("config"));
  CHECK(nlohmann::json::parse(slurp(fa.failures)).empty());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("guard violations become failures, not aborts") {
  const fs::path dir = scratch("fail");
  RunConfig c = small_config(dir);
  c.grid.x1_max = 0.2;
  c.grid.n1 = 128;
  c.sweep = {10.0};
  const RunResult r = run_experiment(c);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].engine == Engine::chebyshev);
  CHECK(r.failures[0].error.find("boundary") != std::string::npos);
  CHECK_FALSE(r.rows.empty());  // the lens rows survive
  const OutputFiles f = write_outputs(c, r);
  CHECK(nlohmann::json::parse(slurp(f.failures)).size() == 1);
  fs::remove_all(dir);
}
