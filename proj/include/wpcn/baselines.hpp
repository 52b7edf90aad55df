#pragma once

#include <Eigen/Dense>

#include "wpcn/noma.hpp"
#include "wpcn/report.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/types.hpp"

namespace wpcn {

// Slotted scheme with the WET length fixed a priori: only the slot lengths are
// optimized. With all circuit powers positive the time budget can go slack (devices
// self-limit); report->budget_active records which branch was taken.
TdmaAllocation solve_tdma_fixed_wet(const Instance& inst, double tau0_seconds,
                                    double tol = 1e-12, SolveReport* report = nullptr);

// Superposed scheme with fixed WET: the UL length is the largest value that keeps the
// aggregate stationarity satisfied or the budget tight, whichever binds first. Strict
// variant throws InfeasibleDeviceError when some device cannot cover its circuit draw.
NomaAllocation solve_noma_fixed_wet(const Instance& inst, double tau0_seconds,
                                    double tol = 1e-12, SolveReport* report = nullptr);

// Per-device-feasible variant: additionally caps the UL length at
// tau0 * min_{p_ck > 0} m_k / p_ck so every device can fund its circuit draw.
NomaAllocation solve_noma_fixed_wet_capped(const Instance& inst, double tau0_seconds,
                                           double tol = 1e-12, SolveReport* report = nullptr);

// Fixed-power comparison (no harvesting): given per-device powers and a slot split,
// contrasts the two access schemes' throughput and radiated energy over the horizon.
struct PowerLimitedComparison {
  double rate_tdma_bits_per_hz = 0.0;
  double rate_noma_bits_per_hz = 0.0;
  double energy_tdma_joules = 0.0;
  double energy_noma_joules = 0.0;
};

PowerLimitedComparison power_limited_comparison(const Instance& inst,
                                                const Eigen::ArrayXd& power_watts,
                                                const Eigen::ArrayXd& tau_seconds);

// Equal-split convenience: tau_k = T / K for every device.
PowerLimitedComparison power_limited_comparison(const Instance& inst,
                                                const Eigen::ArrayXd& power_watts);

}  // namespace wpcn
