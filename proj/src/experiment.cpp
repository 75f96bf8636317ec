#include "qlens/experiment.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>

#include "qlens/eikonal.hpp"
#include "qlens/errors.hpp"
#include "qlens/lens.hpp"
#include "qlens/observables.hpp"
#include "qlens/simd/kernels.hpp"
#include "qlens/tdse/propagation.hpp"
#include "qlens/tdse/snapshot_io.hpp"
#include "qlens/version.hpp"

namespace qlens {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

ResultRow make_row(const RunConfig& c, Engine engine, double v0, double t, double s2) {
  ResultRow r;
  r.t = t;
  r.engine = engine;
  r.v0 = v0;
  r.sigma2 = s2;
  r.sigma2_free = sigma2_free(c.packet, t);
  r.delta_sigma2 = delta_sigma2(r.sigma2, r.sigma2_free);
  return r;
}

std::string run_tag(const RunConfig& c, Engine engine, double v0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_%s_v0_%g", std::string(to_string(engine)).c_str(), v0);
  return c.output.prefix + buf;
}

std::vector<ResultRow> run_grid(const RunConfig& c, Engine engine, double v0) {
  PotentialConfig pc = c.potential;
  pc.v0 = v0;
  const GaussianPotential pot = pc.build();
  const ComplexField2D psi0 = synthesize_packet(pot, c.packet, c.grid);

  tdse::PropagationSettings s;
  s.dt = engine == Engine::chebyshev ? c.time.dt : c.solver.splitstep_dt;
  s.tol = c.solver.tol;
  s.sample_times = tdse::sample_schedule(c.time.t_final, c.time.snapshot_interval);
  s.boundary_limit = c.solver.boundary_limit;
  s.keep_fields = false;
  s.m = c.packet.m;
  s.hbar = c.packet.hbar;

  std::vector<ResultRow> rows;
  std::size_t index = 0;
  auto observer = [&](double t, const ComplexField2D& psi) {
    rows.push_back(make_row(c, engine, v0, t, sigma2(psi, pot.e2())));
    if (c.output.snapshots) {
      char name[32];
      std::snprintf(name, sizeof name, "_t%03zu.bin", index);
      std::filesystem::create_directories(c.output.dir);
      tdse::write_snapshot_with_sidecar(
          std::filesystem::path(c.output.dir) / (run_tag(c, engine, v0) + name), psi, t,
          std::string(to_string(engine)), v0);
    }
    ++index;
  };
  if (engine == Engine::chebyshev) {
    tdse::propagate_chebyshev(pot, psi0, s, observer);
  } else {
    tdse::propagate_splitstep(pot, psi0, s, observer);
  }
  return rows;
}

std::vector<ResultRow> run_lens(const RunConfig& c, double v0) {
  PotentialConfig pc = c.potential;
  pc.v0 = v0;
  const GaussianPotential pot = pc.build();
  std::vector<ResultRow> rows;
  for (double t : tdse::sample_schedule(c.time.t_final, c.time.snapshot_interval)) {
    rows.push_back(make_row(c, Engine::lens, v0, t, lens::predict_sigma2(c.packet, pot, t)));
  }
  return rows;
}

std::vector<ResultRow> run_eikonal(const RunConfig& c, double v0) {
  PotentialConfig pc = c.potential;
  pc.v0 = v0;
  const GaussianPotential pot = pc.build();
  const PacketParams& p = c.packet;
  const Vec2 e1 = pot.e1(), e2 = pot.e2();
  const Vec2 launch = p.q_launch * e1;
  const double source_radius = 7.0 * p.sigma0;

  std::vector<ResultRow> rows;
  for (double t : tdse::sample_schedule(c.time.t_final, c.time.snapshot_interval)) {
    if (t < c.eikonal.t_min) continue;
    const Vec2 centre = (p.q_launch + p.v * t) * e1;
    const double half = 7.2 * sigma2_free(p, t);
    const std::size_t n_recv = c.eikonal.receivers;
    const double ds = 2.0 * half / static_cast<double>(n_recv);
    std::vector<Vec2> points(n_recv);
    std::vector<double> offsets(n_recv);
    for (std::size_t k = 0; k < n_recv; ++k) {
      offsets[k] = -half + (static_cast<double>(k) + 0.5) * ds;
      points[k] = centre + offsets[k] * e2;
    }

    const double spacing = eikonal::recommended_source_spacing(
        p.wavenumber() * e1, launch, source_radius, centre, half, t, p.m, p.hbar);
    std::size_t n = 64;
    while (2.0 * source_radius / static_cast<double>(n) > spacing) n *= 2;
    GridSpec g;
    g.x1_min = launch.x - source_radius;
    g.x1_max = launch.x + source_radius;
    g.x2_min = launch.y - source_radius;
    g.x2_max = launch.y + source_radius;
    g.n1 = g.n2 = n;
    const ComplexField2D psi0 = synthesize_packet(pot, p, g);

    const auto psi = eikonal::propagate_by_quadrature(pot, psi0, t, points, p.m, p.hbar);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n_recv; ++k) {
      const double w = std::norm(psi[k]);
      num += offsets[k] * offsets[k] * w;
      den += w;
    }
    if (!(den > 0.0)) throw NonNormalizableState("eikonal: receiver line carries no amplitude");
    rows.push_back(make_row(c, Engine::eikonal, v0, t, std::sqrt(2.0 * num / den)));
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_single(const RunConfig& config, Engine engine, double v0) {
  switch (engine) {
    case Engine::chebyshev:
    case Engine::splitstep: return run_grid(config, engine, v0);
    case Engine::lens: return run_lens(config, v0);
    case Engine::eikonal: return run_eikonal(config, v0);
  }
  throw InvalidArgument("run_single: unknown engine");
}

RunResult run_experiment(const RunConfig& config) {
  config.validate();
  struct Job {
    Engine engine;
    double v0;
    std::future<std::vector<ResultRow>> rows;
  };
  std::vector<Job> jobs;
  for (double v0 : config.v0_values()) {
    for (Engine e : config.engines) {
      jobs.push_back({e, v0, std::async(std::launch::async, run_single, std::cref(config), e, v0)});
    }
  }
  RunResult result;
  result.config_hash = config_hash_hex(config);
  for (auto& job : jobs) {
    try {
      auto rows = job.rows.get();
      result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    } catch (const std::exception& ex) {
      result.failures.push_back({job.engine, job.v0, ex.what()});
    }
  }
  return result;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "t,engine,v0,sigma2,sigma2_free,delta_sigma2\n";
  for (const auto& r : rows) {
    out += format_double(r.t);
    out += ',';
    out += to_string(r.engine);
    for (double v : {r.v0, r.sigma2, r.sigma2_free, r.delta_sigma2}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("write failed for " + path.string());
}

OutputFiles write_outputs(const RunConfig& config, const RunResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output.dir);
  fs::create_directories(dir);
  OutputFiles files;

  std::map<std::pair<double, int>, std::vector<ResultRow>> groups;
  std::vector<std::pair<double, int>> order;
  for (const auto& r : result.rows) {
    const auto key = std::make_pair(r.v0, static_cast<int>(r.engine));
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  for (const auto& key : order) {
    const auto& rows = groups[key];
    const fs::path path = dir / (run_tag(config, rows.front().engine, key.first) + ".csv");
    write_text_file(path, format_csv(rows));
    files.per_run.push_back(path);
  }
  files.merged = dir / (config.output.prefix + "_sweep.csv");
  write_text_file(files.merged, format_csv(result.rows));

  nlohmann::ordered_json prov;
  prov["version"] = kVersion;
  prov["config_hash"] = result.config_hash;
  prov["config"] = config_to_json(config);
  auto engines = nlohmann::ordered_json::array();
  for (Engine e : config.engines) engines.push_back(std::string(to_string(e)));
  prov["engines"] = engines;
  prov["simd"] = std::string(simd::to_string(simd::active_isa()));
  prov["fft"] = std::string(fftw_version) + " (FFTW_ESTIMATE plans)";
  prov["floating_point"] = "IEEE-754 binary64, round to nearest; results depend on the SIMD variant";
  files.provenance = dir / (config.output.prefix + "_provenance.json");
  write_text_file(files.provenance, prov.dump(2) + "\n");

  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (const auto& f : result.failures) {
    manifest.push_back({{"engine", std::string(to_string(f.engine))},
                        {"v0", f.v0},
                        {"error", f.error}});
  }
  files.failures = dir / (config.output.prefix + "_failures.json");
  write_text_file(files.failures, manifest.dump(2) + "\n");
  return files;
}

}  // namespace qlens
