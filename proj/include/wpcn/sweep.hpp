#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wpcn/types.hpp"

namespace wpcn {

// Enumerator order doubles as the output sort rank.
enum class Scheme { tdma_opt, noma_opt, tdma_fixed, noma_fixed };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);  // throws ConfigError on unknown name

struct DeviceDefaults {
  double eta = 0.9;
  double circuit_power_watts = 1e-4;
};

enum class SweepAxis { pb_power_dbm, circuit_power_mw };

const char* axis_name(SweepAxis a);
SweepAxis parse_axis(const std::string& name);

// One Monte-Carlo experiment: for each device count and each axis value, draw
// num_realizations channels (shared across axis values and schemes — paired samples)
// and average each scheme's solve results.
struct SweepSpec {
  SystemParams base;
  DeviceDefaults device_defaults;
  SweepAxis axis = SweepAxis::pb_power_dbm;
  std::vector<double> axis_values;  // strictly increasing
  std::vector<int> k_values;
  int num_realizations = 100;
  std::uint64_t base_seed = 1;
  std::vector<Scheme> schemes;

  void validate() const;  // throws ConfigError naming the offending field
};

struct SweepRow {
  Scheme scheme = Scheme::tdma_opt;
  int k = 0;
  double axis_value = 0.0;
  double mean_throughput_bits_per_hz = 0.0;
  double mean_energy_joules = 0.0;
  double mean_tau0_seconds = 0.0;
  double mean_ul_time_seconds = 0.0;
  long num_infeasible = 0;  // realizations where the per-device cap was binding
  double mean_solver_iterations = 0.0;
  double max_kkt_residual = 0.0;
};

// Runs the experiment. jobs <= 0 reads WPCN_JOBS (defaults to 1). Output is
// byte-identical for any job count: tasks are indexed, aggregation is sequential.
// Rows come back sorted by (scheme rank, k, axis value).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 0);

// CSV with the exact header below, values at 17 significant digits (round-trip exact):
// scheme,k,axis_value,mean_throughput_bits_per_hz,mean_energy_joules,mean_tau0_seconds,
// mean_ul_time_seconds,num_infeasible,mean_solver_iterations,max_kkt_residual
void emit_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::istream& in);

}  // namespace wpcn
