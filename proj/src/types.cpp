#include "wpcn/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wpcn/errors.hpp"

namespace wpcn {

namespace {

void check_positive_finite(double v, const char* field) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError(field, "must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

void SystemParams::validate() const {
  check_positive_finite(pb_power_watts, "pb_power_watts");
  check_positive_finite(horizon_seconds, "horizon_seconds");
  check_positive_finite(noise_watts, "noise_watts");
  if (num_devices < 1) throw ConfigError("num_devices", "must be at least 1");
  check_positive_finite(pathloss_exponent, "pathloss_exponent");
  check_positive_finite(bandwidth_hz, "bandwidth_hz");
  check_positive_finite(pb_ap_distance_m, "pb_ap_distance_m");
  check_positive_finite(cell_radius_m, "cell_radius_m");
  check_positive_finite(reference_distance_m, "reference_distance_m");
  if (reference_distance_m > cell_radius_m) {
    throw ConfigError("reference_distance_m", "must not exceed cell_radius_m");
  }
}

Instance::Instance(SystemParams params, std::vector<Device> devices) : params_(params) {
  params_.validate();
  if (devices.empty()) throw ConfigError("devices", "instance needs at least one device");
  params_.num_devices = static_cast<int>(devices.size());

  for (auto& d : devices) {
    if (!(std::isfinite(d.eta) && d.eta > 0.0 && d.eta <= 1.0))
      throw InvalidChannelError("device eta outside (0, 1]");
    if (!(std::isfinite(d.circuit_power_watts) && d.circuit_power_watts >= 0.0))
      throw InvalidChannelError("device circuit power negative or non-finite");
    if (!(std::isfinite(d.dl_gain) && d.dl_gain > 0.0))
      throw InvalidChannelError("device DL gain non-positive or non-finite");
    if (!(std::isfinite(d.ul_gain) && d.ul_gain > 0.0))
      throw InvalidChannelError("device UL gain non-positive or non-finite");
    d.gamma = d.ul_gain / params_.noise_watts;  // recomputed, never trusted from input
    if (!std::isfinite(d.gamma)) throw InvalidChannelError("device gamma overflowed");
  }

  // Ascending-gamma order, ties broken by original index (stable).
  std::vector<int> order(devices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return devices[a].gamma < devices[b].gamma; });

  const Eigen::Index n = static_cast<Eigen::Index>(devices.size());
  eta_.resize(n);
  circuit_power_.resize(n);
  dl_gain_.resize(n);
  ul_gain_.resize(n);
  gamma_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Device& d = devices[order[i]];
    eta_[i] = d.eta;
    circuit_power_[i] = d.circuit_power_watts;
    dl_gain_[i] = d.dl_gain;
    ul_gain_[i] = d.ul_gain;
    gamma_[i] = d.gamma;
  }
}

Device Instance::device(Eigen::Index k) const {
  if (k < 0 || k >= size()) throw std::out_of_range("Instance::device: bad index");
  Device d;
  d.eta = eta_[k];
  d.circuit_power_watts = circuit_power_[k];
  d.dl_gain = dl_gain_[k];
  d.ul_gain = ul_gain_[k];
  d.gamma = gamma_[k];
  return d;
}

std::vector<Device> Instance::devices() const {
  std::vector<Device> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index k = 0; k < size(); ++k) out.push_back(device(k));
  return out;
}

}  // namespace wpcn
