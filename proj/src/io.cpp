#include "wpcn/io.hpp"

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "wpcn/errors.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError(item.key(), "unknown field");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.at(field).is_number()) throw ConfigError(field, "must be a number");
  return j.at(field).get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.at(field).is_number_integer()) throw ConfigError(field, "must be an integer");
  return j.at(field).get<int>();
}

// Power-like fields with a unit-suffixed alternate spelling; exactly one may appear.
double dual_unit(const json& j, const std::string& si_field, const std::string& alt_field,
                 double (*convert)(double), double fallback) {
  const bool has_si = j.contains(si_field);
  const bool has_alt = j.contains(alt_field);
  if (has_si && has_alt) {
    throw ConfigError(alt_field, "give either " + si_field + " or " + alt_field + ", not both");
  }
  if (has_si) return get_number(j, si_field);
  if (has_alt) return convert(get_number(j, alt_field));
  return fallback;
}

std::vector<double> get_double_array(const json& j, const std::string& field) {
  if (!j.at(field).is_array()) throw ConfigError(field, "must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(field)) {
    if (!v.is_number()) throw ConfigError(field, "must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json to_json_array(const Eigen::ArrayXd& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

DeviceDefaults device_defaults_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("device_defaults", "must be an object");
  reject_unknown_keys(j, {"eta", "circuit_power_watts", "circuit_power_mw"});
  DeviceDefaults d;
  if (j.contains("eta")) d.eta = get_number(j, "eta");
  d.circuit_power_watts = dual_unit(j, "circuit_power_watts", "circuit_power_mw", mw_to_watts,
                                    d.circuit_power_watts);
  return d;
}

}  // namespace

SystemParams params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("params", "must be an object");
  reject_unknown_keys(j, {"pb_power_watts", "pb_power_dbm", "horizon_seconds", "noise_watts",
                          "noise_dbm", "num_devices", "pathloss_exponent", "bandwidth_hz",
                          "pb_ap_distance_m", "cell_radius_m", "reference_distance_m"});
  SystemParams p;
  p.pb_power_watts = dual_unit(j, "pb_power_watts", "pb_power_dbm", dbm_to_watts, p.pb_power_watts);
  p.noise_watts = dual_unit(j, "noise_watts", "noise_dbm", dbm_to_watts, p.noise_watts);
  if (j.contains("horizon_seconds")) p.horizon_seconds = get_number(j, "horizon_seconds");
  if (j.contains("num_devices")) p.num_devices = get_int(j, "num_devices");
  if (j.contains("pathloss_exponent")) p.pathloss_exponent = get_number(j, "pathloss_exponent");
  if (j.contains("bandwidth_hz")) p.bandwidth_hz = get_number(j, "bandwidth_hz");
  if (j.contains("pb_ap_distance_m")) p.pb_ap_distance_m = get_number(j, "pb_ap_distance_m");
  if (j.contains("cell_radius_m")) p.cell_radius_m = get_number(j, "cell_radius_m");
  if (j.contains("reference_distance_m")) {
    p.reference_distance_m = get_number(j, "reference_distance_m");
  }
  p.validate();
  return p;
}

json params_to_json(const SystemParams& p) {
  return json{{"pb_power_watts", p.pb_power_watts},
              {"horizon_seconds", p.horizon_seconds},
              {"noise_watts", p.noise_watts},
              {"num_devices", p.num_devices},
              {"pathloss_exponent", p.pathloss_exponent},
              {"bandwidth_hz", p.bandwidth_hz},
              {"pb_ap_distance_m", p.pb_ap_distance_m},
              {"cell_radius_m", p.cell_radius_m},
              {"reference_distance_m", p.reference_distance_m}};
}

Device device_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("devices", "each device must be an object");
  reject_unknown_keys(
      j, {"eta", "circuit_power_watts", "circuit_power_mw", "dl_gain", "ul_gain", "gamma"});
  Device d;
  if (j.contains("eta")) d.eta = get_number(j, "eta");
  d.circuit_power_watts =
      dual_unit(j, "circuit_power_watts", "circuit_power_mw", mw_to_watts, d.circuit_power_watts);
  if (j.contains("dl_gain")) d.dl_gain = get_number(j, "dl_gain");
  if (j.contains("ul_gain")) d.ul_gain = get_number(j, "ul_gain");
  // gamma is accepted but ignored; it is recomputed from ul_gain and the noise power.
  return d;
}

json device_to_json(const Device& d) {
  return json{{"eta", d.eta},
              {"circuit_power_watts", d.circuit_power_watts},
              {"dl_gain", d.dl_gain},
              {"ul_gain", d.ul_gain},
              {"gamma", d.gamma}};
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("instance", "must be an object");
  reject_unknown_keys(j, {"params", "devices", "seed", "device_defaults"});
  SystemParams params = j.contains("params") ? params_from_json(j.at("params")) : SystemParams{};

  const bool has_devices = j.contains("devices");
  const bool has_seed = j.contains("seed");
  if (has_devices && has_seed) {
    throw ConfigError("devices", "give explicit devices or a sampling seed, not both");
  }
  if (has_devices) {
    if (!j.at("devices").is_array() || j.at("devices").empty()) {
      throw ConfigError("devices", "must be a nonempty array");
    }
    std::vector<Device> devices;
    for (const auto& dj : j.at("devices")) devices.push_back(device_from_json(dj));
    return Instance(params, std::move(devices));
  }
  if (!has_seed) throw ConfigError("seed", "instance needs either devices or a sampling seed");
  if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
    throw ConfigError("seed", "must be an integer");
  }
  const auto seed = j.at("seed").get<std::uint64_t>();
  DeviceDefaults defaults;
  if (j.contains("device_defaults")) {
    defaults = device_defaults_from_json(j.at("device_defaults"));
  }
  const ChannelRealization real = sample_topology(params, seed);
  return realize_instance(params, real, defaults.eta, defaults.circuit_power_watts);
}

json instance_to_json(const Instance& inst) {
  json devices = json::array();
  for (const Device& d : inst.devices()) devices.push_back(device_to_json(d));
  return json{{"params", params_to_json(inst.params())}, {"devices", devices}};
}

json realization_to_json(const ChannelRealization& real) {
  return json{{"seed", real.seed},
              {"distances_m", real.distances_m},
              {"ul_distances_m", real.ul_distances_m},
              {"fading_dl", real.fading_dl},
              {"fading_ul", real.fading_ul}};
}

ChannelRealization realization_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("realization", "must be an object");
  reject_unknown_keys(j, {"seed", "distances_m", "ul_distances_m", "fading_dl", "fading_ul"});
  ChannelRealization real;
  if (j.contains("seed")) real.seed = j.at("seed").get<std::uint64_t>();
  real.distances_m = get_double_array(j, "distances_m");
  real.ul_distances_m = get_double_array(j, "ul_distances_m");
  real.fading_dl = get_double_array(j, "fading_dl");
  real.fading_ul = get_double_array(j, "fading_ul");
  return real;
}

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("spec", "must be an object");
  reject_unknown_keys(j, {"base", "device_defaults", "axis", "axis_values", "k_values",
                          "num_realizations", "base_seed", "schemes"});
  SweepSpec spec;
  if (j.contains("base")) spec.base = params_from_json(j.at("base"));
  if (j.contains("device_defaults")) {
    spec.device_defaults = device_defaults_from_json(j.at("device_defaults"));
  }
  if (j.contains("axis")) {
    if (!j.at("axis").is_string()) throw ConfigError("axis", "must be a string");
    spec.axis = parse_axis(j.at("axis").get<std::string>());
  }
  if (!j.contains("axis_values")) throw ConfigError("axis_values", "required field missing");
  spec.axis_values = get_double_array(j, "axis_values");
  if (!j.contains("k_values")) throw ConfigError("k_values", "required field missing");
  if (!j.at("k_values").is_array()) throw ConfigError("k_values", "must be an array");
  spec.k_values.clear();
  for (const auto& v : j.at("k_values")) {
    if (!v.is_number_integer()) throw ConfigError("k_values", "must contain integers");
    spec.k_values.push_back(v.get<int>());
  }
  if (j.contains("num_realizations")) spec.num_realizations = get_int(j, "num_realizations");
  if (j.contains("base_seed")) {
    if (!j.at("base_seed").is_number_integer() && !j.at("base_seed").is_number_unsigned()) {
      throw ConfigError("base_seed", "must be an integer");
    }
    spec.base_seed = j.at("base_seed").get<std::uint64_t>();
  }
  if (j.contains("schemes")) {
    if (!j.at("schemes").is_array()) throw ConfigError("schemes", "must be an array");
    spec.schemes.clear();
    for (const auto& v : j.at("schemes")) {
      if (!v.is_string()) throw ConfigError("schemes", "must contain scheme names");
      spec.schemes.push_back(parse_scheme(v.get<std::string>()));
    }
  } else {
    spec.schemes = {Scheme::tdma_opt, Scheme::noma_opt, Scheme::tdma_fixed, Scheme::noma_fixed};
  }
  spec.validate();
  return spec;
}

json sweep_spec_to_json(const SweepSpec& spec) {
  json schemes = json::array();
  for (Scheme s : spec.schemes) schemes.push_back(scheme_name(s));
  return json{{"base", params_to_json(spec.base)},
              {"device_defaults",
               {{"eta", spec.device_defaults.eta},
                {"circuit_power_watts", spec.device_defaults.circuit_power_watts}}},
              {"axis", axis_name(spec.axis)},
              {"axis_values", spec.axis_values},
              {"k_values", spec.k_values},
              {"num_realizations", spec.num_realizations},
              {"base_seed", spec.base_seed},
              {"schemes", schemes}};
}

json tdma_allocation_to_json(const TdmaAllocation& alloc) {
  return json{{"tau0_seconds", alloc.tau0_seconds},
              {"tau_seconds", to_json_array(alloc.tau_seconds)},
              {"power_watts", to_json_array(alloc.power_watts)}};
}

json noma_allocation_to_json(const NomaAllocation& alloc) {
  return json{{"tau0_seconds", alloc.tau0_seconds},
              {"tau1_seconds", alloc.tau1_seconds},
              {"power_watts", to_json_array(alloc.power_watts)}};
}

json report_to_json(const SolveReport& report) {
  return json{{"objective_bits_per_hz", report.objective_bits_per_hz},
              {"energy_joules", report.energy_joules},
              {"outer_iterations", report.outer_iterations},
              {"inner_iterations", report.inner_iterations},
              {"residuals",
               {{"stationarity", report.residuals.stationarity},
                {"budget_slack_seconds", report.residuals.budget_slack_seconds},
                {"causality", report.residuals.causality}}},
              {"budget_active", report.budget_active},
              {"cap_active", report.cap_active}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse failure: ") + e.what());
  }
}

}  // namespace wpcn
