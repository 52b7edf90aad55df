#include "wpcn/channel.hpp"

#include <cmath>
#include <random>

#include "wpcn/errors.hpp"

namespace wpcn {

namespace {

// splitmix64 finalizer: well-mixed, stable across platforms.
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1), open at both ends: 53-bit mantissa centered in its cell. std::
// distributions are implementation-defined, which would break cross-platform
// reproducibility of seeded experiments.
double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Unit-mean exponential via inverse CDF; -log1p(-u) is exact near u = 0.
double exponential1(std::mt19937_64& eng) { return -std::log1p(-uniform01(eng)); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

ChannelRealization sample_topology(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  const int k = params.num_devices;

  ChannelRealization real;
  real.seed = seed;
  real.distances_m.resize(k);
  real.ul_distances_m.resize(k);
  real.fading_dl.resize(k);
  real.fading_ul.resize(k);

  std::mt19937_64 eng(seed);
  const double two_pi = 8.0 * std::atan(1.0);
  for (int i = 0; i < k; ++i) {
    // Uniform over the disc area: radial CDF proportional to r^2, so r = R * sqrt(u),
    // clamped below at the reference distance where the path-loss model stops applying.
    const double u_r = uniform01(eng);
    const double angle = two_pi * uniform01(eng);
    double r = params.cell_radius_m * std::sqrt(u_r);
    if (r < params.reference_distance_m) r = params.reference_distance_m;

    real.distances_m[i] = r;
    // PB at the origin, AP on the positive x-axis.
    const double x = r * std::cos(angle);
    const double y = r * std::sin(angle);
    real.ul_distances_m[i] = std::hypot(x - params.pb_ap_distance_m, y);

    real.fading_dl[i] = exponential1(eng);
    real.fading_ul[i] = exponential1(eng);
  }
  return real;
}

Instance realize_instance(const SystemParams& params, const ChannelRealization& real,
                          double eta, double circuit_power_watts) {
  const std::size_t k = real.distances_m.size();
  if (real.ul_distances_m.size() != k || real.fading_dl.size() != k ||
      real.fading_ul.size() != k) {
    throw ConfigError("realization", "per-device array lengths disagree");
  }
  if (k == 0) throw ConfigError("realization", "no devices in realization");

  std::vector<Device> devices(k);
  for (std::size_t i = 0; i < k; ++i) {
    Device& d = devices[i];
    d.eta = eta;
    d.circuit_power_watts = circuit_power_watts;
    d.dl_gain = 1e-3 * real.fading_dl[i] * std::pow(real.distances_m[i], -params.pathloss_exponent);
    d.ul_gain =
        1e-3 * real.fading_ul[i] * std::pow(real.ul_distances_m[i], -params.pathloss_exponent);
    if (!(std::isfinite(d.dl_gain) && d.dl_gain > 0.0))
      throw InvalidChannelError("realized DL gain non-positive or non-finite");
    if (!(std::isfinite(d.ul_gain) && d.ul_gain > 0.0))
      throw InvalidChannelError("realized UL gain non-positive or non-finite");
  }

  SystemParams p = params;
  p.num_devices = static_cast<int>(k);
  return Instance(p, std::move(devices));
}

}  // namespace wpcn
