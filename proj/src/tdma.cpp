#include "wpcn/tdma.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wpcn/root_finding.hpp"

namespace wpcn {

namespace {
constexpr double kTiny = std::numeric_limits<double>::min();
}

double user_stationarity(double snr, double circuit_snr) {
  if (snr < 0.0) throw std::domain_error("user_stationarity: snr < 0");
  if (circuit_snr < 0.0) throw std::domain_error("user_stationarity: circuit_snr < 0");
  // Natural-log internals, single conversion to bits at the end.
  return std::numbers::log2e * (std::log1p(snr) - (snr + circuit_snr) / (1.0 + snr));
}

double invert_user_stationarity(double lambda, double circuit_snr, double tol, int* iterations) {
  if (lambda < 0.0) throw std::domain_error("invert_user_stationarity: lambda < 0");
  const RootResult r = solve_increasing(
      [circuit_snr](double y) { return user_stationarity(y, circuit_snr); }, lambda, tol);
  if (iterations) *iterations += r.iterations;
  return r.root;
}

double dual_balance(double lambda, const Instance& inst, double tol, int* inner_iterations) {
  const Eigen::ArrayXd c = inst.circuit_snr();
  const Eigen::ArrayXd d = inst.snr_harvest_rate();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < inst.size(); ++k) {
    const double y = invert_user_stationarity(lambda, c[k], tol, inner_iterations);
    sum += d[k] * std::numbers::log2e / (1.0 + y);
  }
  return sum - lambda;
}

TdmaAllocation solve_tdma(const Instance& inst, double tol) {
  return solve_tdma(inst, tol, nullptr, nullptr);
}

TdmaAllocation solve_tdma(const Instance& inst, double tol, TdmaSolverState* state,
                          SolveReport* report) {
  const Eigen::ArrayXd c = inst.circuit_snr();
  const Eigen::ArrayXd d = inst.snr_harvest_rate();
  const double horizon = inst.params().horizon_seconds;

  // Outer bisection: lambda - sum_k D_k log2(e)/(1+y_k(lambda)) is strictly increasing,
  // negative at 0, with a unique positive root (the optimal multiplier).
  int inner = 0;
  const RootResult outer = solve_increasing(
      [&](double lambda) { return -dual_balance(lambda, inst, tol, &inner); }, 0.0, tol);
  const double lambda = outer.root;

  TdmaAllocation alloc;
  const Eigen::Index n = inst.size();
  Eigen::ArrayXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) y[k] = invert_user_stationarity(lambda, c[k], tol, &inner);
  const Eigen::ArrayXd x = y + c;

  // Closed-form time split from the multiplier; budget and causality tight by construction.
  const double tau0 = horizon / (1.0 + (d / x).sum());
  alloc.tau0_seconds = tau0;
  alloc.tau_seconds = d / x * tau0;
  alloc.power_watts = y / inst.gamma();

  if (state) {
    state->lambda = lambda;
    state->snr = y;
    state->x = x;
    state->iterations_outer = outer.iterations;
    state->iterations_inner = inner;
    int scratch = 0;
    state->residual = std::abs(dual_balance(lambda, inst, tol, &scratch));
  }
  if (report) {
    report->objective_bits_per_hz = tdma_objective(alloc, inst);
    report->energy_joules = tdma_energy(alloc, inst);
    report->outer_iterations = outer.iterations;
    report->inner_iterations = inner;
    report->residuals = kkt_residuals(alloc, inst);
    report->budget_active = true;
    report->cap_active = false;
  }
  return alloc;
}

KktResiduals kkt_residuals(const TdmaAllocation& alloc, const Instance& inst) {
  const Eigen::Index n = inst.size();
  if (alloc.tau_seconds.size() != n || alloc.power_watts.size() != n) {
    throw std::invalid_argument("kkt_residuals: allocation size mismatch");
  }
  const Eigen::ArrayXd c = inst.circuit_snr();
  const Eigen::ArrayXd d = inst.snr_harvest_rate();
  const Eigen::ArrayXd m = inst.harvest_rate();
  const Eigen::ArrayXd y = alloc.power_watts * inst.gamma();

  KktResiduals res;

  // The multiplier implied by the WET-duration condition; compare each active user's
  // stationarity value against it.
  const double h0 = (d * std::numbers::log2e / (1.0 + y)).sum();
  double worst = 0.0;
  bool any_active = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (alloc.tau_seconds[k] <= 0.0) continue;
    any_active = true;
    const double dev = std::abs(user_stationarity(y[k], c[k]) - h0);
    worst = std::max(worst, dev);
  }
  res.stationarity = any_active ? worst / std::max(std::abs(h0), kTiny) : 0.0;

  res.budget_slack_seconds =
      std::abs(inst.params().horizon_seconds - alloc.tau0_seconds - alloc.tau_seconds.sum());

  double worst_causality = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double consumed = (alloc.power_watts[k] + inst.circuit_power()[k]) * alloc.tau_seconds[k];
    const double harvested = m[k] * alloc.tau0_seconds;
    worst_causality =
        std::max(worst_causality, std::abs(consumed - harvested) / std::max(harvested, kTiny));
  }
  res.causality = worst_causality;
  return res;
}

double tdma_objective(const TdmaAllocation& alloc, const Instance& inst) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < inst.size(); ++k) {
    if (alloc.tau_seconds[k] == 0.0) continue;
    r += alloc.tau_seconds[k] * std::log1p(alloc.power_watts[k] * inst.gamma()[k]) *
         std::numbers::log2e;
  }
  return r;
}

double tdma_energy(const TdmaAllocation& alloc, const Instance& inst) {
  return inst.params().pb_power_watts * alloc.tau0_seconds;
}

}  // namespace wpcn
