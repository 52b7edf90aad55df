#pragma once

#include <string>

#include <json.hpp>

#include "wpcn/channel.hpp"
#include "wpcn/noma.hpp"
#include "wpcn/report.hpp"
#include "wpcn/sweep.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/types.hpp"

namespace wpcn {

// JSON boundary. Power-like fields accept a dBm/mW alternate spelling
// (pb_power_dbm, noise_dbm, circuit_power_mw); giving both spellings, or an unknown
// key, raises ConfigError naming the field. Omitted fields keep their defaults.
SystemParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SystemParams& p);

Device device_from_json(const nlohmann::json& j);  // input gamma is ignored (recomputed)
nlohmann::json device_to_json(const Device& d);

// An instance document either lists explicit devices:
//   {"params": {...}, "devices": [{...}, ...]}
// or asks for a sampled topology:
//   {"params": {...}, "seed": 42, "device_defaults": {"eta": ..., "circuit_power_mw": ...}}
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

nlohmann::json realization_to_json(const ChannelRealization& real);
ChannelRealization realization_from_json(const nlohmann::json& j);

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

nlohmann::json tdma_allocation_to_json(const TdmaAllocation& alloc);
nlohmann::json noma_allocation_to_json(const NomaAllocation& alloc);
nlohmann::json report_to_json(const SolveReport& report);

// Reads and parses a JSON file; wraps stream/parse failures in ConfigError.
nlohmann::json load_json_file(const std::string& path);

}  // namespace wpcn
