#pragma once

#include <cstdint>
#include <iosfwd>

#include "wpcn/noma.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/types.hpp"

namespace wpcn {

// Exhaustive grid search over the aggregate problem's two free times, with powers set
// by tight causality and cells with any negative power rejected. Successive refinement
// shrinks the window around the incumbent; the incumbent only improves.
struct NomaOracleResult {
  double objective_bits_per_hz = 0.0;
  NomaAllocation allocation;
};
NomaOracleResult brute_force_oracle_noma(const Instance& inst, int levels = 200,
                                         int refinements = 4);

// Grid search for the slotted scheme over the active-budget face (the objective is
// strictly improved by spending the whole horizon). Dimension K, so K <= 3 only.
struct TdmaOracleResult {
  double objective_bits_per_hz = 0.0;
  TdmaAllocation allocation;
};
TdmaOracleResult brute_force_oracle_tdma(const Instance& inst, int levels = 200,
                                         int refinements = 4);

// Builds a slotted allocation from an aggregate one with every device at a common SNR s:
// tau_k = D_k * tau0 / (s + c_k) with s chosen so the slots exactly fill tau1. Such an
// s always exists for allocations with tight causality. The result certifies that the
// slotted scheme can match-or-beat any aggregate allocation's throughput.
struct EqualSnrResult {
  TdmaAllocation allocation;
  double common_snr = 0.0;
  double objective_bits_per_hz = 0.0;
  bool interior = false;  // all slots strictly inside (0, tau1)
};
EqualSnrResult equal_snr_construction(const Instance& inst, const NomaAllocation& noma,
                                      double tol = 1e-12);

// The slotted optimum spends at least as much time charging, and at least as much
// total transmit energy, as the aggregate optimum on the same instance.
struct Theorem1Report {
  double tau0_tdma = 0.0;
  double tau0_noma = 0.0;
  double energy_tdma = 0.0;
  double energy_noma = 0.0;
  bool pass = false;
};
Theorem1Report check_theorem1(const Instance& inst, double tol = 1e-9);

// The slotted optimum's throughput dominates the aggregate optimum's; strictly when
// any circuit power is positive.
struct Theorem2Report {
  double rate_tdma = 0.0;
  double rate_noma = 0.0;
  bool pass = false;
  bool strict = false;
};
Theorem2Report check_theorem2(const Instance& inst, double tol = 1e-9);

// Randomized self-check used by the CLI: scans seeds for strictly feasible instances,
// runs both solvers, checks the two dominance reports, the optimality residuals, the
// equal-SNR construction, and (on a subset of small instances) both grid oracles.
// Returns the number of failed checks; per-check lines go to `log` when non-null.
int run_verification(std::uint64_t seed, int trials, int k_max = 3, double tol = 1e-9,
                     std::ostream* log = nullptr);

}  // namespace wpcn
