#pragma once

#include <Eigen/Core>
#include <vector>

namespace wpcn {

// Network-level constants. All powers in watts, times in seconds, distances in meters.
struct SystemParams {
  double pb_power_watts = 10.0;                 // P_E (40 dBm)
  double horizon_seconds = 0.1;                 // T_max
  double noise_watts = 1.995262314968883e-15;   // sigma^2 at the AP, total over the band (-117 dBm)
  int num_devices = 1;                          // K
  double pathloss_exponent = 2.2;               // alpha
  double bandwidth_hz = 180e3;                  // reporting only; never enters the solvers
  double pb_ap_distance_m = 50.0;
  double cell_radius_m = 5.0;
  double reference_distance_m = 1.0;

  void validate() const;  // throws ConfigError naming the offending field
};

// Per-device physical state.
struct Device {
  double eta = 0.9;                   // harvesting efficiency, (0, 1]
  double circuit_power_watts = 1e-4;  // p_c, constant draw while transmitting, >= 0
  double dl_gain = 0.0;               // h, PB -> device linear power gain, > 0
  double ul_gain = 0.0;               // g, device -> AP linear power gain, > 0
  double gamma = 0.0;                 // g / sigma^2; recomputed on Instance construction
};

// Solver input: system constants plus the device population, kept in ascending-gamma
// order (weakest uplink first) as column arrays for vectorized solver math.
class Instance {
 public:
  Instance(SystemParams params, std::vector<Device> devices);

  const SystemParams& params() const noexcept { return params_; }
  Eigen::Index size() const noexcept { return gamma_.size(); }

  // Per-device columns, ascending-gamma order throughout.
  const Eigen::ArrayXd& eta() const noexcept { return eta_; }
  const Eigen::ArrayXd& circuit_power() const noexcept { return circuit_power_; }  // watts
  const Eigen::ArrayXd& dl_gain() const noexcept { return dl_gain_; }
  const Eigen::ArrayXd& ul_gain() const noexcept { return ul_gain_; }
  const Eigen::ArrayXd& gamma() const noexcept { return gamma_; }

  Device device(Eigen::Index k) const;
  std::vector<Device> devices() const;

  // eta_k * P_E * h_k: watts harvested per second of WET.
  Eigen::ArrayXd harvest_rate() const { return eta_ * params_.pb_power_watts * dl_gain_; }
  // D_k = eta_k * P_E * h_k * gamma_k: received SNR bought per unit of tau0/tau_k.
  Eigen::ArrayXd snr_harvest_rate() const { return harvest_rate() * gamma_; }
  // c_k = p_c,k * gamma_k: circuit draw expressed in SNR units.
  Eigen::ArrayXd circuit_snr() const { return circuit_power_ * gamma_; }

 private:
  SystemParams params_;
  Eigen::ArrayXd eta_;
  Eigen::ArrayXd circuit_power_;
  Eigen::ArrayXd dl_gain_;
  Eigen::ArrayXd ul_gain_;
  Eigen::ArrayXd gamma_;
};

}  // namespace wpcn
