#include "wpcn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/errors.hpp"
#include "wpcn/root_finding.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

namespace {

// Measured throughput of a candidate aggregate cell: powers from tight causality,
// cells demanding negative power are outside the feasible set.
bool noma_cell_rate(const Instance& inst, double t0, double t1, double* rate,
                    Eigen::ArrayXd* powers) {
  if (t1 <= 0.0) {
    *rate = 0.0;
    powers->setZero(inst.size());
    return t0 >= 0.0;
  }
  *powers = inst.harvest_rate() * (t0 / t1) - inst.circuit_power();
  if ((*powers < 0.0).any()) return false;
  *rate = t1 * std::log1p((*powers * inst.gamma()).sum()) * std::numbers::log2e;
  return true;
}

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double step(int levels) const { return (hi - lo) / static_cast<double>(levels - 1); }
  double at(int i, int levels) const {
    return i == levels - 1 ? hi : lo + step(levels) * static_cast<double>(i);
  }
  // Recenter around the incumbent cell, two cells of margin, clamped to the old span.
  Window refined(double center, int levels, double outer_lo, double outer_hi) const {
    const double margin = 2.0 * step(levels);
    return {std::max(outer_lo, center - margin), std::min(outer_hi, center + margin)};
  }
};

}  // namespace

NomaOracleResult brute_force_oracle_noma(const Instance& inst, int levels, int refinements) {
  if (levels < 2) throw std::invalid_argument("brute_force_oracle_noma: levels must be >= 2");
  if (refinements < 0) throw std::invalid_argument("brute_force_oracle_noma: refinements < 0");
  const double horizon = inst.params().horizon_seconds;

  NomaOracleResult best;
  best.objective_bits_per_hz = -1.0;
  Window w0{0.0, horizon};
  Window w1{0.0, horizon};

  Eigen::ArrayXd powers(inst.size());
  best.allocation.tau0_seconds = 0.0;
  best.allocation.tau1_seconds = 0.0;
  best.allocation.power_watts = Eigen::ArrayXd::Zero(inst.size());

  for (int pass = 0; pass <= refinements; ++pass) {
    for (int i = 0; i < levels; ++i) {
      const double t0 = w0.at(i, levels);
      for (int j = 0; j < levels; ++j) {
        const double t1 = w1.at(j, levels);
        if (t0 + t1 > horizon * (1.0 + 1e-12)) break;  // rows are ordered in t1
        double rate = 0.0;
        if (!noma_cell_rate(inst, t0, t1, &rate, &powers)) continue;
        if (rate > best.objective_bits_per_hz) {
          best.objective_bits_per_hz = rate;
          best.allocation.tau0_seconds = t0;
          best.allocation.tau1_seconds = t1;
          best.allocation.power_watts = powers;
        }
      }
    }
    w0 = w0.refined(best.allocation.tau0_seconds, levels, 0.0, horizon);
    w1 = w1.refined(best.allocation.tau1_seconds, levels, 0.0, horizon);
  }
  if (best.objective_bits_per_hz < 0.0) best.objective_bits_per_hz = 0.0;
  return best;
}

TdmaOracleResult brute_force_oracle_tdma(const Instance& inst, int levels, int refinements) {
  if (inst.size() > 3) {
    throw std::invalid_argument("brute_force_oracle_tdma: grid search supports at most 3 devices");
  }
  if (levels < 2) throw std::invalid_argument("brute_force_oracle_tdma: levels must be >= 2");
  if (refinements < 0) throw std::invalid_argument("brute_force_oracle_tdma: refinements < 0");
  const double horizon = inst.params().horizon_seconds;
  const int n = static_cast<int>(inst.size());
  const int free_dims = n;  // tau0 plus n-1 slot lengths; the last slot is the remainder
  const Eigen::ArrayXd m = inst.harvest_rate();
  const Eigen::ArrayXd pc = inst.circuit_power();
  const Eigen::ArrayXd gamma = inst.gamma();

  TdmaOracleResult best;
  best.objective_bits_per_hz = -1.0;
  std::vector<Window> win(free_dims, Window{0.0, horizon});
  std::vector<double> coord(free_dims, 0.0);
  std::vector<double> best_coord(free_dims, 0.0);
  Eigen::ArrayXd tau(n);

  // The budget is active at any optimum (throughput strictly improves by converting
  // leftover time into WET), so the last slot takes the remainder of the horizon.
  const auto evaluate = [&](const std::vector<double>& point) -> double {
    const double tau0 = point[0];
    double used = tau0;
    for (int k = 0; k + 1 < n; ++k) {
      tau[k] = point[k + 1];
      used += tau[k];
    }
    double rem = horizon - used;
    if (rem < -1e-12 * horizon) return -1.0;
    tau[n - 1] = std::max(rem, 0.0);
    double rate = 0.0;
    for (int k = 0; k < n; ++k) {
      if (tau[k] <= 0.0) continue;
      const double p = m[k] * tau0 / tau[k] - pc[k];
      if (p < 0.0) return -1.0;
      rate += tau[k] * std::log1p(p * gamma[k]) * std::numbers::log2e;
    }
    return rate;
  };

  for (int pass = 0; pass <= refinements; ++pass) {
    // Odometer over the free dimensions.
    std::vector<int> idx(free_dims, 0);
    while (true) {
      for (int d = 0; d < free_dims; ++d) coord[d] = win[d].at(idx[d], levels);
      const double rate = evaluate(coord);
      if (rate > best.objective_bits_per_hz) {
        best.objective_bits_per_hz = rate;
        best_coord = coord;
      }
      int d = free_dims - 1;
      while (d >= 0 && ++idx[d] == levels) idx[d--] = 0;
      if (d < 0) break;
    }
    for (int d = 0; d < free_dims; ++d) {
      win[d] = win[d].refined(best_coord[d], levels, 0.0, horizon);
    }
  }

  if (best.objective_bits_per_hz < 0.0) {
    best.objective_bits_per_hz = 0.0;
    best_coord.assign(free_dims, 0.0);
  }
  // Rebuild the winning allocation.
  const double tau0 = best_coord[0];
  double used = tau0;
  Eigen::ArrayXd tau_best(n);
  for (int k = 0; k + 1 < n; ++k) {
    tau_best[k] = best_coord[k + 1];
    used += tau_best[k];
  }
  tau_best[n - 1] = std::max(horizon - used, 0.0);
  Eigen::ArrayXd p_best(n);
  for (int k = 0; k < n; ++k) {
    p_best[k] = tau_best[k] > 0.0 ? std::max(m[k] * tau0 / tau_best[k] - pc[k], 0.0) : 0.0;
  }
  best.allocation.tau0_seconds = tau0;
  best.allocation.tau_seconds = tau_best;
  best.allocation.power_watts = p_best;
  return best;
}

EqualSnrResult equal_snr_construction(const Instance& inst, const NomaAllocation& noma,
                                      double tol) {
  if (!(noma.tau0_seconds > 0.0 && noma.tau1_seconds > 0.0)) {
    throw std::invalid_argument("equal_snr_construction: needs positive WET and UL times");
  }
  if (noma.power_watts.size() != inst.size()) {
    throw std::invalid_argument("equal_snr_construction: allocation size mismatch");
  }
  const Eigen::ArrayXd d = inst.snr_harvest_rate();
  const Eigen::ArrayXd c = inst.circuit_snr();
  const double tau0 = noma.tau0_seconds;
  const double tau1 = noma.tau1_seconds;

  // Slot demand sum_k D_k*tau0/(s + c_k) falls from +inf (any c_k = 0) or a finite
  // ceiling above tau1 as s grows; the common-SNR root makes the slots exactly fill
  // the UL phase.
  const RootResult root = solve_increasing(
      [&](double s) { return tau1 - (d * tau0 / (s + c)).sum(); }, 0.0, tol);
  const double s = root.root;

  EqualSnrResult out;
  out.common_snr = s;
  out.allocation.tau0_seconds = tau0;
  out.allocation.tau_seconds = d * tau0 / (s + c);
  out.allocation.power_watts = s / inst.gamma();
  out.objective_bits_per_hz = out.allocation.tau_seconds.sum() * std::log1p(s) * std::numbers::log2e;
  out.interior = (out.allocation.tau_seconds > 0.0).all() &&
                 (out.allocation.tau_seconds < tau1).all();
  return out;
}

Theorem1Report check_theorem1(const Instance& inst, double tol) {
  const double horizon = inst.params().horizon_seconds;
  const TdmaAllocation tdma = solve_tdma(inst);
  const NomaAllocation noma = solve_noma(inst);

  Theorem1Report rep;
  rep.tau0_tdma = tdma.tau0_seconds;
  rep.tau0_noma = noma.tau0_seconds;
  rep.energy_tdma = tdma_energy(tdma, inst);
  rep.energy_noma = noma_energy(noma, inst);
  rep.pass = rep.tau0_noma >= rep.tau0_tdma - tol * horizon &&
             rep.energy_noma >= rep.energy_tdma - tol * rep.energy_tdma;
  return rep;
}

Theorem2Report check_theorem2(const Instance& inst, double tol) {
  const TdmaAllocation tdma = solve_tdma(inst);
  const NomaAllocation noma = solve_noma(inst);

  Theorem2Report rep;
  rep.rate_tdma = tdma_objective(tdma, inst);
  rep.rate_noma = noma_objective(noma, inst);
  rep.pass = rep.rate_tdma >= rep.rate_noma - tol * rep.rate_tdma;
  rep.strict = inst.circuit_snr().maxCoeff() > 0.0 &&
               rep.rate_tdma - rep.rate_noma > tol * rep.rate_tdma;
  return rep;
}

namespace {

// Cheap strict-feasibility test: the stationary aggregate split keeps every power
// nonnegative iff d_sum/x <= min_k m_k/p_ck.
bool noma_strictly_feasible(const Instance& inst, double tol) {
  const double c_sum = inst.circuit_snr().sum();
  const double d_sum = inst.snr_harvest_rate().sum();
  const double y = depletion_root(c_sum + d_sum, tol);
  const double ratio = d_sum / (y + c_sum);  // tau1/tau0 at the stationary split
  const Eigen::ArrayXd m = inst.harvest_rate();
  const Eigen::ArrayXd pc = inst.circuit_power();
  for (Eigen::Index k = 0; k < inst.size(); ++k) {
    if (pc[k] > 0.0 && ratio > m[k] / pc[k]) return false;
  }
  return true;
}

struct CheckCounter {
  int failures = 0;
  std::ostream* log = nullptr;

  void expect(bool ok, const char* what, std::uint64_t seed, double a, double b) {
    if (!ok) ++failures;
    if (log && !ok) {
      (*log) << "FAIL " << what << " seed=" << seed << " lhs=" << a << " rhs=" << b << '\n';
    }
  }

  void note(const char* what, std::uint64_t seed, double a, double b) {
    if (log) {
      (*log) << "NOTE " << what << " seed=" << seed << " lhs=" << a << " rhs=" << b << '\n';
    }
  }
};

}  // namespace

int run_verification(std::uint64_t seed, int trials, int k_max, double tol, std::ostream* log) {
  if (trials < 1) throw std::invalid_argument("run_verification: trials < 1");
  if (k_max < 1) throw std::invalid_argument("run_verification: k_max < 1");

  SystemParams base;  // defaults carry the reference operating point
  CheckCounter check{0, log};
  constexpr std::uint64_t kScanLimit = 4'000'000;
  int load_order_sightings = 0;

  for (int t = 0; t < trials; ++t) {
    const int k = 1 + t % k_max;
    const double pe_dbm = 28.0 + 2.0 * static_cast<double>(t % 7);
    SystemParams params = base;
    params.num_devices = k;
    params.pb_power_watts = dbm_to_watts(pe_dbm);

    // Scan the substream for an instance where the strict aggregate solver applies.
    Instance inst = [&] {
      for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt >= kScanLimit) {
          throw SolverError("run_verification: no strictly feasible instance found",
                            static_cast<double>(t), static_cast<double>(attempt));
        }
        const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(t), attempt);
        Instance candidate = realize_instance(params, sample_topology(params, s));
        if (noma_strictly_feasible(candidate, 1e-12)) return candidate;
      }
    }();
    const std::uint64_t inst_seed = mix_seed(seed, static_cast<std::uint64_t>(t), 0);

    // Dominance reports.
    const Theorem1Report t1 = check_theorem1(inst, tol);
    const Theorem2Report t2 = check_theorem2(inst, tol);
    check.expect(t1.pass, "theorem1", inst_seed, t1.tau0_noma, t1.tau0_tdma);
    check.expect(t2.pass, "theorem2", inst_seed, t2.rate_tdma, t2.rate_noma);
    if (k >= 2) {
      check.expect(t2.strict, "theorem2-strict", inst_seed, t2.rate_tdma, t2.rate_noma);
    }

    // First-order residuals of both solvers at tight tolerance.
    SolveReport tdma_report;
    TdmaSolverState state;
    const TdmaAllocation tdma = solve_tdma(inst, 1e-12, &state, &tdma_report);
    SolveReport noma_report;
    const NomaAllocation noma = solve_noma(inst, 1e-12, &noma_report);
    check.expect(tdma_report.residuals.stationarity <= 1e-8, "tdma-stationarity", inst_seed,
                 tdma_report.residuals.stationarity, 1e-8);
    check.expect(tdma_report.residuals.budget_slack_seconds <=
                     1e-9 * inst.params().horizon_seconds,
                 "tdma-budget", inst_seed, tdma_report.residuals.budget_slack_seconds, 1e-9);
    check.expect(tdma_report.residuals.causality <= 1e-9, "tdma-causality", inst_seed,
                 tdma_report.residuals.causality, 1e-9);
    check.expect(noma_report.residuals.stationarity <= 1e-8, "noma-stationarity", inst_seed,
                 noma_report.residuals.stationarity, 1e-8);
    check.expect(noma_report.residuals.budget_slack_seconds <=
                     1e-9 * inst.params().horizon_seconds,
                 "noma-budget", inst_seed, noma_report.residuals.budget_slack_seconds, 1e-9);
    check.expect(noma_report.residuals.causality <= 1e-9, "noma-causality", inst_seed,
                 noma_report.residuals.causality, 1e-9);

    // The dominance chain through the equal-SNR construction, and its feasibility.
    const double r_tdma = tdma_report.objective_bits_per_hz;
    const double r_noma = noma_report.objective_bits_per_hz;
    const EqualSnrResult eq = equal_snr_construction(inst, noma);
    const KktResiduals eq_res = kkt_residuals(eq.allocation, inst);
    check.expect((eq.allocation.power_watts >= 0.0).all() &&
                     eq_res.budget_slack_seconds <= 1e-9 * inst.params().horizon_seconds &&
                     eq_res.causality <= 1e-9,
                 "equal-snr-feasible", inst_seed, eq_res.causality, 1e-9);
    check.expect(eq.objective_bits_per_hz >= r_noma - tol * r_noma &&
                     eq.objective_bits_per_hz <= r_tdma + tol * r_tdma,
                 "equal-snr-sandwich", inst_seed, eq.objective_bits_per_hz, r_noma);
    // The aggregate optimum's decoding load usually dominates every per-user load of the
    // slotted optimum, and that pointwise ordering is one route to the WET-time ordering
    // checked above — but it is not universal. When circuit loads c_k = p_c,k*gamma_k are
    // spread widely (strong near/far disparity), the largest per-user load can exceed the
    // aggregate one while the WET-time and throughput orderings still hold; grid oracles
    // confirm both solvers are optimal on such instances. A sighting is therefore a
    // property of the problem, not a solver defect: it is logged for transparency but
    // does not count as a verification failure.
    const double x_noma = (noma.power_watts * inst.gamma()).sum() + inst.circuit_snr().sum();
    const double x_user_max = state.x.maxCoeff();
    if (x_noma < x_user_max * (1.0 - 1e-9)) {
      ++load_order_sightings;
      check.note("aggregate-x-counterexample", inst_seed, x_noma, x_user_max);
    }

    // Zero-circuit twin: both schemes coincide.
    {
      std::vector<Device> devs = inst.devices();
      for (auto& dv : devs) dv.circuit_power_watts = 0.0;
      Instance zero(inst.params(), devs);
      const TdmaAllocation tz = solve_tdma(zero);
      const NomaAllocation nz = solve_noma(zero);
      const double rz_t = tdma_objective(tz, zero);
      const double rz_n = noma_objective(nz, zero);
      check.expect(std::abs(tz.tau0_seconds - nz.tau0_seconds) <=
                       1e-6 * zero.params().horizon_seconds,
                   "zero-circuit-tau0", inst_seed, tz.tau0_seconds, nz.tau0_seconds);
      check.expect(std::abs(rz_t - rz_n) <= 1e-6 * rz_t, "zero-circuit-rate", inst_seed, rz_t,
                   rz_n);
    }

    // Grid-oracle agreement on a subset of small instances (the expensive check).
    if (k <= 2 && t % 8 == 0) {
      const NomaOracleResult noma_oracle = brute_force_oracle_noma(inst, 150, 4);
      check.expect(std::abs(noma_oracle.objective_bits_per_hz - r_noma) <= 1e-4 * r_noma,
                   "noma-oracle", inst_seed, noma_oracle.objective_bits_per_hz, r_noma);
      const TdmaOracleResult tdma_oracle = brute_force_oracle_tdma(inst, 150, 4);
      check.expect(std::abs(tdma_oracle.objective_bits_per_hz - r_tdma) <= 1e-4 * r_tdma,
                   "tdma-oracle", inst_seed, tdma_oracle.objective_bits_per_hz, r_tdma);
    }

    if (log) {
      (*log) << "trial " << t << " k=" << k << " pe_dbm=" << pe_dbm << " r_tdma=" << r_tdma
             << " r_noma=" << r_noma << " ok=" << (check.failures == 0 ? "yes" : "no") << '\n';
    }
  }
  if (log && load_order_sightings > 0) {
    (*log) << "note: per-user decoding load exceeded the aggregate load on " << load_order_sightings
           << " of " << trials << " trial(s); reported only, not a failure\n";
  }
  return check.failures;
}

}  // namespace wpcn
