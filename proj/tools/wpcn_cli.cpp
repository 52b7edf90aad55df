#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpcn/baselines.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/io.hpp"
#include "wpcn/noma.hpp"
#include "wpcn/sweep.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/verify.hpp"

namespace {

// Exit codes: 0 success, 1 solver/verification failure, 2 configuration problems.
constexpr int kExitSolverFailure = 1;
constexpr int kExitConfigError = 2;

int run_solve(const std::string& config_path, const std::string& scheme_str,
              const std::string& out_path, double tau0, double tol) {
  const wpcn::Scheme scheme = wpcn::parse_scheme(scheme_str);
  const wpcn::Instance inst = wpcn::instance_from_json(wpcn::load_json_file(config_path));
  const double horizon = inst.params().horizon_seconds;
  const double wet = tau0 > 0.0 ? tau0 : horizon / 2.0;

  wpcn::SolveReport report;
  nlohmann::json alloc_json;
  switch (scheme) {
    case wpcn::Scheme::tdma_opt: {
      const wpcn::TdmaAllocation a = wpcn::solve_tdma(inst, tol, nullptr, &report);
      alloc_json = wpcn::tdma_allocation_to_json(a);
      break;
    }
    case wpcn::Scheme::noma_opt: {
      const wpcn::NomaAllocation a = wpcn::solve_noma(inst, tol, &report);
      alloc_json = wpcn::noma_allocation_to_json(a);
      break;
    }
    case wpcn::Scheme::tdma_fixed: {
      const wpcn::TdmaAllocation a = wpcn::solve_tdma_fixed_wet(inst, wet, tol, &report);
      alloc_json = wpcn::tdma_allocation_to_json(a);
      break;
    }
    case wpcn::Scheme::noma_fixed: {
      const wpcn::NomaAllocation a = wpcn::solve_noma_fixed_wet(inst, wet, tol, &report);
      alloc_json = wpcn::noma_allocation_to_json(a);
      break;
    }
  }

  nlohmann::json doc{{"scheme", wpcn::scheme_name(scheme)},
                     {"allocation", alloc_json},
                     {"report", wpcn::report_to_json(report)},
                     {"throughput_bits_per_second", report.objective_bits_per_hz *
                                                        inst.params().bandwidth_hz / horizon}};
  std::cout << doc.dump(2) << '\n';
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw wpcn::ConfigError("out", "cannot open '" + out_path + "' for writing");
    out << doc.dump(2) << '\n';
  }
  return 0;
}

int run_sweep_cmd(const std::string& spec_path, const std::string& out_path, int jobs) {
  const wpcn::SweepSpec spec = wpcn::sweep_spec_from_json(wpcn::load_json_file(spec_path));
  const std::vector<wpcn::SweepRow> rows = wpcn::run_sweep(spec, jobs);

  std::ofstream out(out_path);
  if (!out) throw wpcn::ConfigError("out", "cannot open '" + out_path + "' for writing");
  wpcn::emit_csv(out, rows);

  // Experiment metadata stays on stderr so the CSV remains byte-stable and parseable.
  std::cerr << "sweep: axis=" << wpcn::axis_name(spec.axis) << " k_values=" << spec.k_values.size()
            << " axis_values=" << spec.axis_values.size()
            << " realizations=" << spec.num_realizations << " base_seed=" << spec.base_seed
            << " rows=" << rows.size() << " -> " << out_path << '\n';
  std::cerr << "sweep: channels are drawn once per (k, realization) and reused across axis "
               "values and schemes (paired comparison)\n";
  return 0;
}

int run_verify(std::uint64_t seed, int trials, int k_max, double tol) {
  const int failures = wpcn::run_verification(seed, trials, k_max, tol, &std::cout);
  if (failures > 0) {
    std::cerr << "verification failed: " << failures << " check(s)\n";
    return kExitSolverFailure;
  }
  std::cout << "verification passed: " << trials << " trials\n";
  return 0;
}

int run_topology(const std::string& config_path, std::uint64_t seed) {
  wpcn::SystemParams params;
  if (!config_path.empty()) {
    params = wpcn::params_from_json(wpcn::load_json_file(config_path));
  }
  const wpcn::ChannelRealization real = wpcn::sample_topology(params, seed);
  std::cout << wpcn::realization_to_json(real).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time/power allocation solvers and benchmarks for wireless powered networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string spec_path;
  std::string out_path;
  std::string scheme_str = "tdma_opt";
  double tau0 = 0.0;
  double tol = 1e-12;
  int jobs = 0;
  int trials = 100;
  int k_max = 3;
  std::uint64_t seed = 1;
  double verify_tol = 1e-9;

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance under a chosen scheme");
  solve->add_option("--config", config_path, "instance document (JSON)")->required();
  solve->add_option("--scheme", scheme_str,
                    "tdma_opt | noma_opt | tdma_fixed | noma_fixed");
  solve->add_option("--out", out_path, "also write the result document to this file");
  solve->add_option("--tau0", tau0, "WET duration for the fixed schemes (default: horizon/2)");
  solve->add_option("--tol", tol, "solver tolerance (relative)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and emit CSV");
  sweep->add_option("--spec", spec_path, "sweep specification document (JSON)")->required();
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--jobs", jobs, "worker threads (default: WPCN_JOBS or 1)");

  CLI::App* verify = app.add_subcommand("verify", "Run the theorem/oracle self-checks");
  verify->add_option("--trials", trials, "number of random trials");
  verify->add_option("--k-max", k_max, "largest device count exercised");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--tol", verify_tol, "comparison tolerance (relative)");

  CLI::App* topology = app.add_subcommand("topology", "Sample and print a channel realization");
  topology->add_option("--config", config_path, "system parameter document (JSON)");
  topology->add_option("--seed", seed, "topology seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (solve->parsed()) return run_solve(config_path, scheme_str, out_path, tau0, tol);
    if (sweep->parsed()) return run_sweep_cmd(spec_path, out_path, jobs);
    if (verify->parsed()) return run_verify(seed, trials, k_max, verify_tol);
    if (topology->parsed()) return run_topology(config_path, seed);
  } catch (const wpcn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const wpcn::InfeasibleDeviceError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const wpcn::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return 0;
}
