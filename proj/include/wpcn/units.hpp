#pragma once

#include <cmath>

// dBm/mW appear only at the I/O boundary; everything internal is SI (watts, joules, seconds).
namespace wpcn {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double mw_to_watts(double mw) { return mw * 1e-3; }

inline double watts_to_mw(double watts) { return watts * 1e3; }

}  // namespace wpcn
