// qlens: command-line front end.
//   qlens run      [--config f] [--set k=v]...   one config, every listed engine
//   qlens sweep    [--config f] [--set k=v]...   V0 sweep (default 10,20,30,40)
//   qlens appendix-scaling [options]             action difference vs epsilon
//   qlens validate                               internal consistency checks
// Exit status: 0 ok, 1 guard or check failure, 2 usage/configuration error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "qlens/classical.hpp"
#include "qlens/config.hpp"
#include "qlens/errors.hpp"
#include "qlens/experiment.hpp"
#include "qlens/simd/kernels.hpp"
#include "qlens/validate.hpp"
#include "qlens/version.hpp"

namespace {

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.path, "JSON run configuration");
  cmd->add_option("-s,--set", args.overrides, "override, e.g. --set potential.v0=20")
      ->take_all();
}

qlens::RunConfig load(const ConfigArgs& args, bool sweep_defaults) {
  std::vector<std::string> overrides;
  if (sweep_defaults) overrides.push_back("sweep=[10,20,30,40]");
  overrides.insert(overrides.end(), args.overrides.begin(), args.overrides.end());
  std::optional<std::filesystem::path> path;
  if (!args.path.empty()) path = args.path;
  if (sweep_defaults && path) {
    // A sweep listed in the file wins over the default list.
    std::ifstream is(*path);
    const auto j = nlohmann::json::parse(is, nullptr, false);
    if (!j.is_discarded() && j.contains("sweep")) overrides.erase(overrides.begin());
  }
  return qlens::load_config(path, overrides);
}

int do_run(const ConfigArgs& args, bool sweep) {
  const qlens::RunConfig config = load(args, sweep);
  const qlens::RunResult result = qlens::run_experiment(config);
  const auto files = qlens::write_outputs(config, result);
  std::printf("config %s, %zu rows -> %s\n", result.config_hash.c_str(), result.rows.size(),
              files.merged.string().c_str());
  for (const auto& f : result.failures) {
    std::fprintf(stderr, "FAILED %s v0=%g: %s\n", std::string(qlens::to_string(f.engine)).c_str(),
                 f.v0, f.error.c_str());
  }
  return result.failures.empty() ? 0 : 1;
}

struct ScalingArgs {
  double v0 = 10.0;
  double a1 = 100.0;
  double a2 = 1.0;
  std::vector<double> qp{-0.8, 0.05};
  std::vector<double> q{0.8, 0.05};
  double t = 0.0267;
  std::vector<double> eps{0.02, 0.04, 0.08, 0.16, 0.32};
  std::size_t steps = 4000;
  std::string out = "appendix_scaling.csv";
};

int do_scaling(const ScalingArgs& a) {
  const qlens::GaussianPotential pot(a.v0, {1.0, 0.0}, a.a1, a.a2);
  const auto r = qlens::classical::verify_appendix_scaling(
      pot, {a.qp[0], a.qp[1]}, {a.q[0], a.q[1]}, a.t, a.eps, a.steps);
  std::string csv = "epsilon,delta,delta_naive,energy_drift,shooting_residual\n";
  for (const auto& p : r.points) {
    csv += qlens::format_double(p.epsilon) + ',' + qlens::format_double(p.delta) + ',' +
           qlens::format_double(p.delta_naive) + ',' + qlens::format_double(p.energy_drift) +
           ',' + qlens::format_double(p.shooting_residual) + '\n';
  }
  qlens::write_text_file(a.out, csv);
  nlohmann::ordered_json meta;
  meta["version"] = qlens::kVersion;
  meta["potential"] = {{"v0", a.v0}, {"e1", {1.0, 0.0}}, {"a1", a.a1}, {"a2", a.a2}};
  meta["q_start"] = a.qp;
  meta["q_end"] = a.q;
  meta["t"] = a.t;
  meta["steps"] = a.steps;
  meta["fit"] = {{"slope", r.slope},
                 {"intercept", r.intercept},
                 {"rms_residual", r.residual},
                 {"points", r.fitted}};
  qlens::write_text_file(a.out + ".json", meta.dump(2) + "\n");
  std::printf("slope %.6f (rms residual %.3g) -> %s\n", r.slope, r.residual, a.out.c_str());
  double drift = 0.0;
  for (const auto& p : r.points) drift = std::max(drift, p.energy_drift);
  return (r.slope >= 1.9 && r.slope <= 2.1 && drift <= 1e-8) ? 0 : 1;
}

int do_validate() {
  int failed = 0;
  for (const auto& c : qlens::run_validation()) {
    std::printf("[%s] %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.empty() ? "" : ": ", c.detail.c_str());
    failed += c.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-island wave packet scattering: grid, lens, eikonal and classical engines"};
  app.set_version_flag("--version", qlens::kVersion);
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "kernel variant: scalar, avx2 or neon");

  ConfigArgs run_args, sweep_args;
  auto* run = app.add_subcommand("run", "run one configuration");
  add_config_options(run, run_args);
  auto* sweep = app.add_subcommand("sweep", "V0 sweep, 10/20/30/40 unless the config lists one");
  add_config_options(sweep, sweep_args);

  ScalingArgs sa;
  auto* scaling = app.add_subcommand("appendix-scaling", "epsilon^2 scaling of the action gap");
  scaling->add_option("--v0", sa.v0);
  scaling->add_option("--a1", sa.a1);
  scaling->add_option("--a2", sa.a2);
  scaling->add_option("--from", sa.qp)->expected(2);
  scaling->add_option("--to", sa.q)->expected(2);
  scaling->add_option("-t,--time", sa.t);
  scaling->add_option("--epsilons", sa.eps)->expected(2, 64);
  scaling->add_option("--steps", sa.steps);
  scaling->add_option("-o,--output", sa.out, "CSV path; metadata goes to <path>.json");

  auto* validate = app.add_subcommand("validate", "run the internal consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!simd.empty()) {
      const auto isa = qlens::simd::parse_isa(simd);
      if (!isa || !qlens::simd::set_active_isa(*isa)) {
        std::fprintf(stderr, "SIMD variant '%s' is not available\n", simd.c_str());
        return 2;
      }
    }
    if (run->parsed()) return do_run(run_args, false);
    if (sweep->parsed()) return do_run(sweep_args, true);
    if (scaling->parsed()) return do_scaling(sa);
    if (validate->parsed()) return do_validate();
  } catch (const qlens::ConfigurationError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const qlens::InvalidArgument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
