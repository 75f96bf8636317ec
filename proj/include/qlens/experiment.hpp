#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qlens/config.hpp"

namespace qlens {

struct ResultRow {
  double t = 0.0;
  Engine engine = Engine::lens;
  double v0 = 0.0;
  double sigma2 = 0.0;
  double sigma2_free = 0.0;
  double delta_sigma2 = 0.0;  // sigma2 - sigma2_free
};

struct RunFailure {
  Engine engine = Engine::lens;
  double v0 = 0.0;
  std::string error;
};

struct RunResult {
  std::vector<ResultRow> rows;  // ordered by v0 (config order), engine, t
  std::vector<RunFailure> failures;
  std::string config_hash;
};

/// Time series of one engine at one V0. Grid engines sample every
/// snapshot_interval up to t_final; the eikonal engine only from
/// eikonal.t_min on, reading sigma2 off a transverse receiver line through
/// the packet centre Q + v t.
std::vector<ResultRow> run_single(const RunConfig& config, Engine engine, double v0);

/// Every (V0, engine) pair of the config, concurrently. Failures are
/// collected rather than thrown.
RunResult run_experiment(const RunConfig& config);

/// Header `t,engine,v0,sigma2,sigma2_free,delta_sigma2`, %.17g floats.
std::string format_csv(const std::vector<ResultRow>& rows);

struct OutputFiles {
  std::vector<std::filesystem::path> per_run;
  std::filesystem::path merged;
  std::filesystem::path provenance;
  std::filesystem::path failures;
};

/// One CSV per (engine, V0), the merged CSV, a provenance sidecar and the
/// failure manifest, all under config.output.dir.
OutputFiles write_outputs(const RunConfig& config, const RunResult& result);

/// Plain text file write; throws Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// %.17g
std::string format_double(double v);

}  // namespace qlens
