#pragma once

#include <Eigen/Dense>

#include "wpcn/report.hpp"
#include "wpcn/types.hpp"

namespace wpcn {

// Time/power split for the superposed scheme: WET phase tau0 then one shared UL phase.
struct NomaAllocation {
  double tau0_seconds = 0.0;
  double tau1_seconds = 0.0;
  Eigen::ArrayXd power_watts;  // per-device transmit power over the shared phase
};

// Root of (1 + y) * ln(1 + y) = y + a for a >= 0. Strictly increasing LHS - RHS after
// y = 0 crossing; a = 0 gives 0. Used by both the aggregate solver and the baselines.
double depletion_root(double a, double tol = 1e-12, int* iterations = nullptr);

// Scalar optimality condition of the aggregate problem, in bits:
// G(y) = log2(1+y) - (y + c_sum + d_sum) * log2(e) / (1+y). Strictly increasing; its
// root is the optimal aggregate SNR y* (then x* = y* + c_sum).
double noma_root_function(double snr, double circuit_snr_sum, double harvest_snr_sum);

// Closed-form solve of the aggregate problem. Throws InfeasibleDeviceError when the
// stationary split demands negative power from some device (tolerance: p_k is negative
// beyond 1e-12 relative to that device's gross power draw). Tiny negative dust is
// clamped to zero.
NomaAllocation solve_noma(const Instance& inst, double tol = 1e-12);
NomaAllocation solve_noma(const Instance& inst, double tol, SolveReport* report);

// Same problem with per-device nonnegativity enforced: when the unconstrained optimum
// is infeasible, the UL phase is clamped to the worst-user bottleneck
//   tau1_cap = T * min_k m_k / (p_ck + m_k),   m_k = eta_k * P * h_k,
// which is optimal because the reduced objective is concave in tau1 and every p_k
// decreases in tau1. The binding device transmits at exactly zero power. When the cap
// engages, the report's stationarity entry switches to the one-sided condition of the
// constrained problem (zero when the clamp is on the correct side of the optimum).
NomaAllocation solve_noma_capped(const Instance& inst, double tol = 1e-12);
NomaAllocation solve_noma_capped(const Instance& inst, double tol, SolveReport* report);

// Optimality-system residuals for the aggregate problem: scalar stationarity
// (normalized by the larger of its two terms), absolute budget slack, relative
// causality. A capped allocation reports its true (nonzero) stationarity residual.
KktResiduals noma_kkt_residuals(const NomaAllocation& alloc, const Instance& inst);

double noma_objective(const NomaAllocation& alloc, const Instance& inst);
double noma_energy(const NomaAllocation& alloc, const Instance& inst);  // P_E * tau0

}  // namespace wpcn
