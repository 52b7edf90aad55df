#pragma once

#include <cstdint>
#include <vector>

#include "wpcn/types.hpp"

namespace wpcn {

// One sampled topology + fading draw. The PB sits at the origin, the AP on the positive
// x-axis at params.pb_ap_distance_m; devices land uniformly over the disc area around
// the PB with radius clamped below at the reference distance.
struct ChannelRealization {
  std::vector<double> distances_m;     // PB -> device, in [reference_distance_m, cell_radius_m]
  std::vector<double> ul_distances_m;  // device -> AP, from the sampled 2-D position
  std::vector<double> fading_dl;       // rho^2 draws, exponential with unit mean, > 0
  std::vector<double> fading_ul;       // independent of the DL draws
  std::uint64_t seed = 0;
};

// Deterministic: (params, seed) fully determine the realization. Draw order per device is
// radius, angle, DL fading, UL fading.
ChannelRealization sample_topology(const SystemParams& params, std::uint64_t seed);

// Builds the solver input from a realization: h = 1e-3 * fading_dl * d^-alpha on the DL,
// g = 1e-3 * fading_ul * d_ul^-alpha on the UL, gamma = g / noise. Devices share eta and
// circuit power (identical-parameter population; defaults 0.9 and 0.1 mW).
Instance realize_instance(const SystemParams& params, const ChannelRealization& real,
                          double eta = 0.9, double circuit_power_watts = 1e-4);

// Fixed 64-bit mixers for deriving substream seeds; used instead of std::hash so seed
// derivation is identical across compilers and runs.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace wpcn
