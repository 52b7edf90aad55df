#pragma once

namespace wpcn {

// First-order-condition residuals evaluated at an allocation.
struct KktResiduals {
  // max_k |f(y_k; c_k) - H0| / max(|H0|, eps) over devices with positive time, where H0
  // is the multiplier implied by the WET-duration stationarity condition; 0 with no
  // active device.
  double stationarity = 0.0;
  // |T_max - tau0 - sum of UL times|, in seconds (divide by T_max for the relative slack).
  double budget_slack_seconds = 0.0;
  // max_k |(p_k + p_c,k) * t_k - harvested_k| / max(harvested_k, tiny).
  double causality = 0.0;
};

struct SolveReport {
  double objective_bits_per_hz = 0.0;
  double energy_joules = 0.0;  // PB-side energy, P_E * tau0
  int outer_iterations = 0;    // dual / stationary-point bisection steps
  int inner_iterations = 0;    // total per-device inversion steps across the solve
  KktResiduals residuals;
  bool budget_active = true;  // fixed-WET TDMA may leave UL time unused; surfaced here
  bool cap_active = false;    // NOMA worst-user feasibility cap engaged (capped solver)
};

}  // namespace wpcn
