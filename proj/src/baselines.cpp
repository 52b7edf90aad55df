#include "wpcn/baselines.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wpcn/errors.hpp"
#include "wpcn/rates.hpp"
#include "wpcn/root_finding.hpp"

namespace wpcn {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kPowerDust = 1e-12;

// Stationarity of the fixed-WET slotted problem at an allocation: every active user's
// f(y_k; c_k) should sit at the common multiplier mu (0 when the budget is slack).
// Each deviation is normalized by the size of f's own terms, so the measure stays
// stable when mu = 0.
double fixed_wet_stationarity(const Eigen::ArrayXd& y, const Eigen::ArrayXd& c,
                              const Eigen::ArrayXd& tau, double mu) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    if (tau[k] <= 0.0) continue;
    const double term1 = std::log1p(y[k]) * std::numbers::log2e;
    const double term2 = (y[k] + c[k]) * std::numbers::log2e / (1.0 + y[k]);
    const double scale = std::max({std::abs(term1), std::abs(term2), std::abs(mu), kTiny});
    worst = std::max(worst, std::abs(term1 - term2 - mu) / scale);
  }
  return worst;
}

void fill_tdma_report(SolveReport* report, const TdmaAllocation& alloc, const Instance& inst,
                      double mu, int outer, int inner, bool budget_active) {
  if (!report) return;
  report->objective_bits_per_hz = tdma_objective(alloc, inst);
  report->energy_joules = tdma_energy(alloc, inst);
  report->outer_iterations = outer;
  report->inner_iterations = inner;
  report->residuals = kkt_residuals(alloc, inst);
  report->residuals.stationarity = fixed_wet_stationarity(
      alloc.power_watts * inst.gamma(), inst.circuit_snr(), alloc.tau_seconds, mu);
  report->budget_active = budget_active;
  report->cap_active = false;
}

}  // namespace

TdmaAllocation solve_tdma_fixed_wet(const Instance& inst, double tau0_seconds, double tol,
                                    SolveReport* report) {
  const double horizon = inst.params().horizon_seconds;
  if (!(tau0_seconds > 0.0 && tau0_seconds < horizon)) {
    throw std::domain_error("solve_tdma_fixed_wet: tau0 must lie strictly inside (0, horizon)");
  }
  const double budget = horizon - tau0_seconds;
  const Eigen::ArrayXd c = inst.circuit_snr();
  const Eigen::ArrayXd d = inst.snr_harvest_rate();
  const Eigen::Index n = inst.size();

  int inner = 0;
  // Total slot time demanded at multiplier mu; strictly decreasing in mu. With any
  // c_k = 0 the mu = 0 demand is infinite (rate keeps growing with slot length), so
  // the budget can only go slack when every device pays circuit power.
  const auto total_time = [&](double mu) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double y = invert_user_stationarity(mu, c[k], tol, &inner);
      total += d[k] * tau0_seconds / (y + c[k]);
    }
    return total;
  };

  TdmaAllocation alloc;
  alloc.tau0_seconds = tau0_seconds;
  Eigen::ArrayXd y(n);

  if ((c > 0.0).all() && total_time(0.0) <= budget) {
    // Unconstrained per-slot optimum already fits: budget slack, mu = 0.
    for (Eigen::Index k = 0; k < n; ++k) y[k] = invert_user_stationarity(0.0, c[k], tol, &inner);
    alloc.tau_seconds = d * tau0_seconds / (y + c);
    alloc.power_watts = y / inst.gamma();
    fill_tdma_report(report, alloc, inst, 0.0, 0, inner, false);
    return alloc;
  }

  const RootResult outer =
      solve_increasing([&](double mu) { return budget - total_time(mu); }, 0.0, tol);
  const double mu = outer.root;
  for (Eigen::Index k = 0; k < n; ++k) y[k] = invert_user_stationarity(mu, c[k], tol, &inner);
  Eigen::ArrayXd tau = d * tau0_seconds / (y + c);

  // Land exactly on the budget, then rebuild powers from tight causality so the
  // rescale never breaks the energy constraint.
  tau *= budget / tau.sum();
  const Eigen::ArrayXd x = d * tau0_seconds / tau;
  y = (x - c).max(0.0);
  alloc.tau_seconds = tau;
  alloc.power_watts = y / inst.gamma();
  fill_tdma_report(report, alloc, inst, mu, outer.iterations, inner, true);
  return alloc;
}

namespace {

NomaAllocation solve_noma_fixed_common(const Instance& inst, double tau0_seconds, double tol,
                                       SolveReport* report, bool capped) {
  const double horizon = inst.params().horizon_seconds;
  if (!(tau0_seconds > 0.0 && tau0_seconds < horizon)) {
    throw std::domain_error("solve_noma_fixed_wet: tau0 must lie strictly inside (0, horizon)");
  }
  const double c_sum = inst.circuit_snr().sum();
  const double d_sum = inst.snr_harvest_rate().sum();
  const Eigen::ArrayXd m = inst.harvest_rate();
  const double budget = horizon - tau0_seconds;

  // Interior stationary point of tau1 -> tau1*log2(1 + d_sum*tau0/tau1 - c_sum): the
  // same depletion root with the circuit sum as the energy constant. With no circuit
  // cost the objective increases all the way to the budget endpoint.
  int iterations = 0;
  double tau1 = budget;
  bool budget_active = true;
  if (c_sum > 0.0) {
    const double y0 = depletion_root(c_sum, tol, &iterations);
    const double tau1_stat = d_sum * tau0_seconds / (y0 + c_sum);
    if (tau1_stat < budget) {
      tau1 = tau1_stat;
      budget_active = false;
    }
  }

  bool cap_active = false;
  if (capped) {
    // Keep every device able to fund its circuit draw: p_k >= 0 iff
    // tau1 <= tau0 * m_k / p_ck. The objective increases toward its stationary
    // point, so the binding cap is optimal for the restricted problem.
    double tau1_cap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < inst.size(); ++k) {
      const double pc = inst.circuit_power()[k];
      if (pc > 0.0) tau1_cap = std::min(tau1_cap, tau0_seconds * m[k] / pc);
    }
    if (tau1_cap < tau1) {
      tau1 = tau1_cap;
      cap_active = true;
      budget_active = false;
    }
  }

  NomaAllocation alloc;
  alloc.tau0_seconds = tau0_seconds;
  alloc.tau1_seconds = tau1;
  alloc.power_watts = m * (tau0_seconds / tau1) - inst.circuit_power();

  if (!capped) {
    const Eigen::ArrayXd gross = m * (tau0_seconds / tau1);
    std::vector<int> infeasible;
    for (Eigen::Index k = 0; k < inst.size(); ++k) {
      if (alloc.power_watts[k] < -kPowerDust * gross[k]) infeasible.push_back(static_cast<int>(k));
    }
    if (!infeasible.empty()) throw InfeasibleDeviceError(std::move(infeasible));
  }
  alloc.power_watts = alloc.power_watts.max(0.0);

  if (report) {
    report->objective_bits_per_hz = noma_objective(alloc, inst);
    report->energy_joules = noma_energy(alloc, inst);
    report->outer_iterations = iterations;
    report->inner_iterations = 0;
    report->residuals = noma_kkt_residuals(alloc, inst);
    // Stationarity of the reduced single-variable problem: zero at an interior
    // optimum; at a clamped endpoint the derivative is legitimately positive, so only
    // a negative derivative counts as a violation.
    const double y = (alloc.power_watts * inst.gamma()).sum();
    const double term1 = std::log1p(y) * std::numbers::log2e;
    const double term2 = (y + c_sum) * std::numbers::log2e / (1.0 + y);
    const double scale = std::max({std::abs(term1), std::abs(term2), kTiny});
    const double deriv = term1 - term2;
    report->residuals.stationarity =
        (budget_active || cap_active) ? std::max(0.0, -deriv) / scale : std::abs(deriv) / scale;
    report->budget_active = budget_active;
    report->cap_active = cap_active;
  }
  return alloc;
}

}  // namespace

NomaAllocation solve_noma_fixed_wet(const Instance& inst, double tau0_seconds, double tol,
                                    SolveReport* report) {
  return solve_noma_fixed_common(inst, tau0_seconds, tol, report, false);
}

NomaAllocation solve_noma_fixed_wet_capped(const Instance& inst, double tau0_seconds, double tol,
                                           SolveReport* report) {
  return solve_noma_fixed_common(inst, tau0_seconds, tol, report, true);
}

PowerLimitedComparison power_limited_comparison(const Instance& inst,
                                                const Eigen::ArrayXd& power_watts,
                                                const Eigen::ArrayXd& tau_seconds) {
  const Eigen::Index n = inst.size();
  if (power_watts.size() != n || tau_seconds.size() != n) {
    throw std::invalid_argument("power_limited_comparison: input size mismatch");
  }
  if ((power_watts < 0.0).any() || (tau_seconds < 0.0).any()) {
    throw std::domain_error("power_limited_comparison: negative power or time");
  }
  const double horizon = inst.params().horizon_seconds;
  if (tau_seconds.sum() > horizon * (1.0 + 1e-12)) {
    throw std::domain_error("power_limited_comparison: slot times exceed the horizon");
  }

  PowerLimitedComparison out;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.rate_tdma_bits_per_hz += rate_tdma(tau_seconds[k], power_watts[k], inst.gamma()[k]);
  }
  out.rate_noma_bits_per_hz =
      horizon * std::log1p((power_watts * inst.gamma()).sum()) * std::numbers::log2e;
  out.energy_tdma_joules = (tau_seconds * power_watts).sum();
  out.energy_noma_joules = horizon * power_watts.sum();
  return out;
}

PowerLimitedComparison power_limited_comparison(const Instance& inst,
                                                const Eigen::ArrayXd& power_watts) {
  const double share = inst.params().horizon_seconds / static_cast<double>(inst.size());
  return power_limited_comparison(inst, power_watts,
                                  Eigen::ArrayXd::Constant(inst.size(), share));
}

}  // namespace wpcn
