#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wpcn {

// Configuration/document problem; carries the offending field for CLI diagnostics.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Channel draws that cannot become a valid instance (non-positive or non-finite gain).
class InvalidChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bracketing/bisection loop exhausted its iteration budget; carries the last bracket.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double bracket_lo, double bracket_hi)
      : std::runtime_error(message + " [last bracket " + std::to_string(bracket_lo) + ", " +
                           std::to_string(bracket_hi) + "]"),
        lo_(bracket_lo),
        hi_(bracket_hi) {}

  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

// The NOMA stationary point asks the listed devices for negative transmit power:
// their circuit draw exceeds what they can fund from harvested energy.
class InfeasibleDeviceError : public std::runtime_error {
 public:
  explicit InfeasibleDeviceError(std::vector<int> devices)
      : std::runtime_error(describe(devices)), devices_(std::move(devices)) {}

  const std::vector<int>& devices() const noexcept { return devices_; }

 private:
  static std::string describe(const std::vector<int>& devices) {
    std::string s = "devices unable to sustain circuit power from harvest:";
    for (int k : devices) s += ' ' + std::to_string(k);
    return s;
  }

  std::vector<int> devices_;
};

}  // namespace wpcn
