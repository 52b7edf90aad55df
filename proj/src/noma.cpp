#include "wpcn/noma.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wpcn/errors.hpp"
#include "wpcn/root_finding.hpp"

namespace wpcn {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
// Negative powers larger than this (relative to the device's gross draw) mean the
// stationary split genuinely cannot fund that device's circuit; smaller ones are
// bisection dust and get clamped.
constexpr double kPowerDust = 1e-12;

struct NomaSolveScratch {
  double y = 0.0;
  int iterations = 0;
};

// Shared closed-form body: given the aggregate root y, lay out times and powers.
NomaAllocation layout_from_root(const Instance& inst, double y, double c_sum, double d_sum) {
  const double x = y + c_sum;
  const double horizon = inst.params().horizon_seconds;
  NomaAllocation alloc;
  alloc.tau0_seconds = horizon / (1.0 + d_sum / x);
  alloc.tau1_seconds = (d_sum / x) * alloc.tau0_seconds;
  alloc.power_watts =
      inst.harvest_rate() * (alloc.tau0_seconds / alloc.tau1_seconds) - inst.circuit_power();
  return alloc;
}

void fill_report(SolveReport* report, const NomaAllocation& alloc, const Instance& inst,
                 int outer_iterations, bool cap_active) {
  if (!report) return;
  report->objective_bits_per_hz = noma_objective(alloc, inst);
  report->energy_joules = noma_energy(alloc, inst);
  report->outer_iterations = outer_iterations;
  report->inner_iterations = 0;
  report->residuals = noma_kkt_residuals(alloc, inst);
  if (cap_active) {
    // Under the worst-user cap the interior condition G = 0 legitimately does not
    // hold; the right first-order check is one-sided (G >= 0 left of the stationary
    // point), so only a negative G counts against the solution.
    const double y = (alloc.power_watts * inst.gamma()).sum();
    const double c_sum = inst.circuit_snr().sum();
    const double d_sum = inst.snr_harvest_rate().sum();
    const double term1 = std::log1p(y) * std::numbers::log2e;
    const double term2 = (y + c_sum + d_sum) * std::numbers::log2e / (1.0 + y);
    const double scale = std::max({std::abs(term1), std::abs(term2), kTiny});
    report->residuals.stationarity = std::max(0.0, term2 - term1) / scale;
  }
  report->budget_active = true;
  report->cap_active = cap_active;
}

NomaSolveScratch solve_root(const Instance& inst, double tol) {
  const double c_sum = inst.circuit_snr().sum();
  const double d_sum = inst.snr_harvest_rate().sum();
  NomaSolveScratch s;
  s.y = depletion_root(c_sum + d_sum, tol, &s.iterations);
  return s;
}

}  // namespace

double depletion_root(double a, double tol, int* iterations) {
  if (a < 0.0) throw std::domain_error("depletion_root: a < 0");
  // g(y) = (1+y)ln(1+y) - y is strictly increasing from 0 with unbounded range.
  const RootResult r = solve_increasing(
      [](double y) { return (1.0 + y) * std::log1p(y) - y; }, a, tol);
  if (iterations) *iterations += r.iterations;
  return r.root;
}

double noma_root_function(double snr, double circuit_snr_sum, double harvest_snr_sum) {
  if (snr < 0.0) throw std::domain_error("noma_root_function: snr < 0");
  return std::numbers::log2e *
         (std::log1p(snr) - (snr + circuit_snr_sum + harvest_snr_sum) / (1.0 + snr));
}

NomaAllocation solve_noma(const Instance& inst, double tol) { return solve_noma(inst, tol, nullptr); }

NomaAllocation solve_noma(const Instance& inst, double tol, SolveReport* report) {
  const NomaSolveScratch s = solve_root(inst, tol);
  NomaAllocation alloc =
      layout_from_root(inst, s.y, inst.circuit_snr().sum(), inst.snr_harvest_rate().sum());

  // Gross draw per device: what it would spend with zero circuit power. Negative net
  // power beyond dust means the device cannot sustain its circuit from harvest.
  const Eigen::ArrayXd gross =
      inst.harvest_rate() * (alloc.tau0_seconds / alloc.tau1_seconds);
  std::vector<int> infeasible;
  for (Eigen::Index k = 0; k < inst.size(); ++k) {
    if (alloc.power_watts[k] < -kPowerDust * gross[k]) infeasible.push_back(static_cast<int>(k));
  }
  if (!infeasible.empty()) throw InfeasibleDeviceError(std::move(infeasible));
  alloc.power_watts = alloc.power_watts.max(0.0);

  fill_report(report, alloc, inst, s.iterations, false);
  return alloc;
}

NomaAllocation solve_noma_capped(const Instance& inst, double tol) {
  return solve_noma_capped(inst, tol, nullptr);
}

NomaAllocation solve_noma_capped(const Instance& inst, double tol, SolveReport* report) {
  const NomaSolveScratch s = solve_root(inst, tol);
  NomaAllocation alloc =
      layout_from_root(inst, s.y, inst.circuit_snr().sum(), inst.snr_harvest_rate().sum());

  const double horizon = inst.params().horizon_seconds;
  const Eigen::ArrayXd m = inst.harvest_rate();
  // Every per-device power is decreasing in tau1, so "some power negative at the
  // stationary split" is exactly "tau1 beyond the worst-user cap"; the reduced
  // objective is concave in tau1, so clamping to the cap is optimal.
  const double tau1_cap = horizon * (m / (inst.circuit_power() + m)).minCoeff();
  bool cap_active = false;
  if (alloc.tau1_seconds > tau1_cap) {
    cap_active = true;
    alloc.tau1_seconds = tau1_cap;
    alloc.tau0_seconds = horizon - tau1_cap;
    alloc.power_watts =
        m * (alloc.tau0_seconds / alloc.tau1_seconds) - inst.circuit_power();
  }
  alloc.power_watts = alloc.power_watts.max(0.0);

  fill_report(report, alloc, inst, s.iterations, cap_active);
  return alloc;
}

KktResiduals noma_kkt_residuals(const NomaAllocation& alloc, const Instance& inst) {
  if (alloc.power_watts.size() != inst.size()) {
    throw std::invalid_argument("noma_kkt_residuals: allocation size mismatch");
  }
  const double c_sum = inst.circuit_snr().sum();
  const double d_sum = inst.snr_harvest_rate().sum();

  KktResiduals res;

  if (alloc.tau1_seconds > 0.0 && alloc.tau0_seconds > 0.0) {
    const double y = (alloc.power_watts * inst.gamma()).sum();
    const double term1 = std::log1p(y) * std::numbers::log2e;
    const double term2 = (y + c_sum + d_sum) * std::numbers::log2e / (1.0 + y);
    res.stationarity =
        std::abs(term1 - term2) / std::max({std::abs(term1), std::abs(term2), kTiny});
  }

  res.budget_slack_seconds =
      std::abs(inst.params().horizon_seconds - alloc.tau0_seconds - alloc.tau1_seconds);

  double worst = 0.0;
  for (Eigen::Index k = 0; k < inst.size(); ++k) {
    const double consumed =
        (alloc.power_watts[k] + inst.circuit_power()[k]) * alloc.tau1_seconds;
    const double harvested = inst.harvest_rate()[k] * alloc.tau0_seconds;
    worst = std::max(worst, std::abs(consumed - harvested) / std::max(harvested, kTiny));
  }
  res.causality = worst;
  return res;
}

double noma_objective(const NomaAllocation& alloc, const Instance& inst) {
  if (alloc.tau1_seconds == 0.0) return 0.0;
  return alloc.tau1_seconds * std::log1p((alloc.power_watts * inst.gamma()).sum()) *
         std::numbers::log2e;
}

double noma_energy(const NomaAllocation& alloc, const Instance& inst) {
  return inst.params().pb_power_watts * alloc.tau0_seconds;
}

}  // namespace wpcn
