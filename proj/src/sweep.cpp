#include "wpcn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "wpcn/baselines.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/noma.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::tdma_opt: return "tdma_opt";
    case Scheme::noma_opt: return "noma_opt";
    case Scheme::tdma_fixed: return "tdma_fixed";
    case Scheme::noma_fixed: return "noma_fixed";
  }
  throw std::logic_error("scheme_name: bad enum value");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "tdma_opt") return Scheme::tdma_opt;
  if (name == "noma_opt") return Scheme::noma_opt;
  if (name == "tdma_fixed") return Scheme::tdma_fixed;
  if (name == "noma_fixed") return Scheme::noma_fixed;
  throw ConfigError("schemes", "unknown scheme '" + name + "'");
}

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::pb_power_dbm: return "pb_power_dbm";
    case SweepAxis::circuit_power_mw: return "circuit_power_mw";
  }
  throw std::logic_error("axis_name: bad enum value");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "pb_power_dbm") return SweepAxis::pb_power_dbm;
  if (name == "circuit_power_mw") return SweepAxis::circuit_power_mw;
  throw ConfigError("axis", "unknown axis '" + name + "'");
}

void SweepSpec::validate() const {
  base.validate();
  if (!(device_defaults.eta > 0.0 && device_defaults.eta <= 1.0)) {
    throw ConfigError("device_defaults.eta", "must lie in (0, 1]");
  }
  if (!(device_defaults.circuit_power_watts >= 0.0) ||
      !std::isfinite(device_defaults.circuit_power_watts)) {
    throw ConfigError("device_defaults.circuit_power_watts", "must be finite and >= 0");
  }
  if (axis_values.empty()) throw ConfigError("axis_values", "must be nonempty");
  for (std::size_t i = 0; i < axis_values.size(); ++i) {
    if (!std::isfinite(axis_values[i])) throw ConfigError("axis_values", "must be finite");
    if (i > 0 && !(axis_values[i] > axis_values[i - 1])) {
      throw ConfigError("axis_values", "must be strictly increasing");
    }
    if (axis == SweepAxis::circuit_power_mw && axis_values[i] < 0.0) {
      throw ConfigError("axis_values", "circuit power cannot be negative");
    }
  }
  if (k_values.empty()) throw ConfigError("k_values", "must be nonempty");
  for (int k : k_values) {
    if (k < 1) throw ConfigError("k_values", "device counts must be >= 1");
  }
  if (num_realizations < 1) throw ConfigError("num_realizations", "must be >= 1");
  if (schemes.empty()) throw ConfigError("schemes", "must be nonempty");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < schemes.size(); ++j) {
      if (schemes[i] == schemes[j]) throw ConfigError("schemes", "duplicate scheme listed");
    }
  }
}

namespace {

struct CellResult {
  double throughput = 0.0;
  double energy = 0.0;
  double tau0 = 0.0;
  double ul_time = 0.0;
  double iterations = 0.0;
  double kkt = 0.0;
  bool capped = false;
};

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("WPCN_JOBS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

// One realization: shared channels, one solve per (axis value, scheme).
void run_task(const SweepSpec& spec, int k, std::uint64_t realization,
              std::vector<CellResult>& out) {
  SystemParams params = spec.base;
  params.num_devices = k;
  const std::uint64_t seed =
      mix_seed(spec.base_seed, static_cast<std::uint64_t>(k), realization);
  const ChannelRealization real = sample_topology(params, seed);
  const double horizon = params.horizon_seconds;

  std::size_t cell = 0;
  for (double axis_value : spec.axis_values) {
    SystemParams p = params;
    double circuit_power = spec.device_defaults.circuit_power_watts;
    if (spec.axis == SweepAxis::pb_power_dbm) {
      p.pb_power_watts = dbm_to_watts(axis_value);
    } else {
      circuit_power = mw_to_watts(axis_value);
    }
    const Instance inst = realize_instance(p, real, spec.device_defaults.eta, circuit_power);

    for (Scheme scheme : spec.schemes) {
      SolveReport rep;
      double tau0 = 0.0;
      double ul_time = 0.0;
      switch (scheme) {
        case Scheme::tdma_opt: {
          const TdmaAllocation a = solve_tdma(inst, 1e-12, nullptr, &rep);
          tau0 = a.tau0_seconds;
          ul_time = a.tau_seconds.sum();
          break;
        }
        case Scheme::noma_opt: {
          const NomaAllocation a = solve_noma_capped(inst, 1e-12, &rep);
          tau0 = a.tau0_seconds;
          ul_time = a.tau1_seconds;
          break;
        }
        case Scheme::tdma_fixed: {
          const TdmaAllocation a = solve_tdma_fixed_wet(inst, horizon / 2.0, 1e-12, &rep);
          tau0 = a.tau0_seconds;
          ul_time = a.tau_seconds.sum();
          break;
        }
        case Scheme::noma_fixed: {
          const NomaAllocation a = solve_noma_fixed_wet_capped(inst, horizon / 2.0, 1e-12, &rep);
          tau0 = a.tau0_seconds;
          ul_time = a.tau1_seconds;
          break;
        }
      }
      CellResult& cr = out[cell++];
      cr.throughput = rep.objective_bits_per_hz;
      cr.energy = rep.energy_joules;
      cr.tau0 = tau0;
      cr.ul_time = ul_time;
      cr.iterations = static_cast<double>(rep.outer_iterations + rep.inner_iterations);
      // Budget slack only counts when the solver meant to spend the whole horizon.
      const double budget_part =
          rep.budget_active ? rep.residuals.budget_slack_seconds / horizon : 0.0;
      cr.kkt = std::max({rep.residuals.stationarity, budget_part, rep.residuals.causality});
      cr.capped = rep.cap_active;
    }
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  const int workers = resolve_jobs(jobs);

  const std::size_t num_k = spec.k_values.size();
  const std::size_t num_axis = spec.axis_values.size();
  const std::size_t num_schemes = spec.schemes.size();
  const std::size_t n = static_cast<std::size_t>(spec.num_realizations);
  const std::size_t cells_per_task = num_axis * num_schemes;
  const std::size_t num_tasks = num_k * n;

  // Results land in preallocated per-task slots, so scheduling order cannot matter.
  std::vector<std::vector<CellResult>> results(num_tasks,
                                               std::vector<CellResult>(cells_per_task));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= num_tasks) return;
      const std::size_t k_idx = task / n;
      const std::uint64_t i = static_cast<std::uint64_t>(task % n);
      try {
        run_task(spec, spec.k_values[k_idx], i, results[task]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Deterministic aggregation: schemes in enum-rank order, then k, then axis value,
  // realizations accumulated in index order.
  std::vector<Scheme> ordered = spec.schemes;
  std::sort(ordered.begin(), ordered.end(),
            [](Scheme a, Scheme b) { return static_cast<int>(a) < static_cast<int>(b); });

  std::vector<SweepRow> rows;
  rows.reserve(ordered.size() * num_k * num_axis);
  for (Scheme scheme : ordered) {
    std::size_t scheme_idx = 0;
    while (spec.schemes[scheme_idx] != scheme) ++scheme_idx;
    for (std::size_t k_idx = 0; k_idx < num_k; ++k_idx) {
      for (std::size_t a = 0; a < num_axis; ++a) {
        SweepRow row;
        row.scheme = scheme;
        row.k = spec.k_values[k_idx];
        row.axis_value = spec.axis_values[a];
        const std::size_t cell = a * num_schemes + scheme_idx;
        double kkt_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const CellResult& cr = results[k_idx * n + i][cell];
          row.mean_throughput_bits_per_hz += cr.throughput;
          row.mean_energy_joules += cr.energy;
          row.mean_tau0_seconds += cr.tau0;
          row.mean_ul_time_seconds += cr.ul_time;
          row.mean_solver_iterations += cr.iterations;
          row.num_infeasible += cr.capped ? 1 : 0;
          kkt_max = std::max(kkt_max, cr.kkt);
        }
        const double dn = static_cast<double>(n);
        row.mean_throughput_bits_per_hz /= dn;
        row.mean_energy_joules /= dn;
        row.mean_tau0_seconds /= dn;
        row.mean_ul_time_seconds /= dn;
        row.mean_solver_iterations /= dn;
        row.max_kkt_residual = kkt_max;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

namespace {

constexpr const char* kCsvHeader =
    "scheme,k,axis_value,mean_throughput_bits_per_hz,mean_energy_joules,mean_tau0_seconds,"
    "mean_ul_time_seconds,num_infeasible,mean_solver_iterations,max_kkt_residual";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void emit_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << scheme_name(r.scheme) << ',' << r.k << ',' << format_double(r.axis_value) << ','
        << format_double(r.mean_throughput_bits_per_hz) << ','
        << format_double(r.mean_energy_joules) << ',' << format_double(r.mean_tau0_seconds)
        << ',' << format_double(r.mean_ul_time_seconds) << ',' << r.num_infeasible << ','
        << format_double(r.mean_solver_iterations) << ','
        << format_double(r.max_kkt_residual) << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed");
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("csv", "missing or mismatched header row");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    SweepRow r;
    std::getline(ls, field, ',');
    r.scheme = parse_scheme(field);
    std::getline(ls, field, ',');
    r.k = std::stoi(field);
    const auto next_double = [&] {
      std::getline(ls, field, ',');
      return std::stod(field);
    };
    r.axis_value = next_double();
    r.mean_throughput_bits_per_hz = next_double();
    r.mean_energy_joules = next_double();
    r.mean_tau0_seconds = next_double();
    r.mean_ul_time_seconds = next_double();
    std::getline(ls, field, ',');
    r.num_infeasible = std::stol(field);
    r.mean_solver_iterations = next_double();
    r.max_kkt_residual = next_double();
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wpcn
