#pragma once

#include <Eigen/Dense>

#include "wpcn/report.hpp"
#include "wpcn/types.hpp"

namespace wpcn {

// Time/power split for the slotted scheme: WET phase tau0 then one UL slot per device.
struct TdmaAllocation {
  double tau0_seconds = 0.0;
  Eigen::ArrayXd tau_seconds;   // per-device UL slot lengths
  Eigen::ArrayXd power_watts;   // per-device transmit power over its slot
};

// Solver internals exposed for diagnostics. x = y + c holds exactly by construction
// (y is the decision variable, x the effective energy-per-gamma draw).
struct TdmaSolverState {
  double lambda = 0.0;          // time-budget multiplier, bits/Hz per second
  Eigen::ArrayXd snr;           // y_k = p_k * gamma_k at the optimum
  Eigen::ArrayXd x;             // x_k = y_k + c_k, total depletion in SNR units
  int iterations_outer = 0;     // dual bisection steps
  int iterations_inner = 0;     // total inner inversion steps across all evaluations
  double residual = 0.0;        // |dual_balance| at the returned lambda
};

// Per-user optimality condition in bits: f(y; c) = log2(1+y) - (y+c) * log2(e) / (1+y).
// Strictly increasing in y for y >= 0, f(0; c) = -c * log2(e) <= 0, unbounded above.
double user_stationarity(double snr, double circuit_snr);

// Solves user_stationarity(y; c) = lambda for y >= 0. Requires lambda >= 0; lambda == 0
// with c == 0 returns 0 immediately. Bracket-doubling from [0, 1] then bisection.
double invert_user_stationarity(double lambda, double circuit_snr, double tol = 1e-12,
                                int* iterations = nullptr);

// H(lambda) = sum_k D_k * log2(e) / (1 + y_k(lambda)) - lambda, strictly decreasing,
// positive at 0+, negative for large lambda; its root is the optimal multiplier.
double dual_balance(double lambda, const Instance& inst, double tol = 1e-12,
                    int* inner_iterations = nullptr);

// Full solve: nested bisection on the dual, closed-form time split from the root.
// The time budget is exactly tight and every device empties its battery exactly.
TdmaAllocation solve_tdma(const Instance& inst, double tol = 1e-12);
TdmaAllocation solve_tdma(const Instance& inst, double tol, TdmaSolverState* state,
                          SolveReport* report);

// Checks a given allocation against the optimality system of the full problem:
// stationarity (common f-value across active users, relative), budget slack in seconds
// (absolute; an all-zeros allocation leaves the whole horizon slack), and energy
// causality (relative to harvested energy). Works for any allocation, not just ours.
KktResiduals kkt_residuals(const TdmaAllocation& alloc, const Instance& inst);

// Objective and energy helpers shared by solvers and reports. Energy is the PB-side
// radiated energy P_E * tau0 (the quantity the dominance theorem compares).
double tdma_objective(const TdmaAllocation& alloc, const Instance& inst);
double tdma_energy(const TdmaAllocation& alloc, const Instance& inst);

}  // namespace wpcn
