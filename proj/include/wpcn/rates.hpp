#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "wpcn/types.hpp"

namespace wpcn {

// Energy a device banks during a WET phase of length tau0: eta * P * h * tau0, in joules.
inline double harvested_energy(const Device& dev, double pb_power_watts, double tau0_seconds) {
  if (tau0_seconds < 0.0) throw std::domain_error("harvested_energy: tau0_seconds < 0");
  return dev.eta * pb_power_watts * dev.dl_gain * tau0_seconds;
}

// Slot throughput tau * log2(1 + p * gamma) in bits/Hz. An unused slot carries nothing,
// regardless of power (0 * log(...) would be NaN-prone at extreme SNR, so short-circuit).
inline double rate_tdma(double tau_seconds, double power_watts, double gamma) {
  if (tau_seconds == 0.0) return 0.0;
  return tau_seconds * std::log1p(power_watts * gamma) * std::numbers::log2e;
}

// Per-user throughput under SIC at the shared receiver, decoding in ascending-gamma
// order: user k is decoded k-th, so every later (stronger) user still interferes.
inline double rate_noma_per_user(int k, double tau1_seconds, const Eigen::ArrayXd& power_watts,
                                 const Instance& inst) {
  if (k < 0 || k >= inst.size()) throw std::out_of_range("rate_noma_per_user: bad device index");
  if (power_watts.size() != inst.size())
    throw std::invalid_argument("rate_noma_per_user: power vector size mismatch");
  if (tau1_seconds == 0.0) return 0.0;
  const Eigen::ArrayXd snr = power_watts * inst.gamma();
  const double interference = (k + 1 < inst.size()) ? snr.tail(inst.size() - k - 1).sum() : 0.0;
  return tau1_seconds * std::log1p(snr[k] / (interference + 1.0)) * std::numbers::log2e;
}

// Aggregate SIC throughput; the per-user logs telescope to one log of the summed SNR.
inline double noma_sum_rate(double tau1_seconds, const Eigen::ArrayXd& power_watts,
                            const Instance& inst) {
  if (power_watts.size() != inst.size())
    throw std::invalid_argument("noma_sum_rate: power vector size mismatch");
  if (tau1_seconds == 0.0) return 0.0;
  return tau1_seconds * std::log1p((power_watts * inst.gamma()).sum()) * std::numbers::log2e;
}

}  // namespace wpcn
