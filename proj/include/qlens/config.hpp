#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlens/gaussian_packet.hpp"
#include "qlens/grid.hpp"
#include "qlens/potential.hpp"

namespace qlens {

enum class Engine { chebyshev, splitstep, eikonal, lens };

std::string_view to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view name);

struct PotentialConfig {
  double v0 = 10.0;
  Vec2 e1{1.0, 0.0};
  double a1 = 100.0;
  double a2 = 1.0;

  GaussianPotential build() const { return GaussianPotential(v0, e1, a1, a2); }
};

struct TimeConfig {
  double t_final = 0.032;
  double dt = 2.5e-4;
  double snapshot_interval = 1e-3;
};

struct SolverConfig {
  double tol = 1e-12;           // Chebyshev truncation
  double splitstep_dt = 1e-5;
  double boundary_limit = 1e-8;
};

struct EikonalConfig {
  double t_min = 0.015;         // earlier rows are skipped
  std::size_t receivers = 256;  // points on the transverse receiver line
};

struct OutputConfig {
  std::string dir = "qlens-out";
  std::string prefix = "run";
  bool snapshots = false;
};

struct RunConfig {
  PotentialConfig potential;
  PacketParams packet;
  GridSpec grid;
  TimeConfig time;
  SolverConfig solver;
  EikonalConfig eikonal;
  std::vector<Engine> engines{Engine::chebyshev, Engine::lens};
  std::vector<double> sweep;  // V0 values; empty runs potential.v0 alone
  OutputConfig output;

  /// Sweep values, or {potential.v0}.
  std::vector<double> v0_values() const;
  /// Throws ConfigurationError describing the first problem found.
  void validate() const;
};

/// Keys missing from `j` keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& c);

/// "a.b.c=value": value is parsed as JSON when possible, else taken as a
/// string. Missing intermediate objects are created.
void apply_override(nlohmann::json& j, std::string_view assignment);

/// Reads `path` (or starts from defaults when empty), applies overrides in
/// order and validates.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides = {});

/// FNV-1a over the canonical JSON form.
std::uint64_t config_hash(const RunConfig& c);
std::string config_hash_hex(const RunConfig& c);

}  // namespace qlens
