#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ilw {

struct CheckItem {
  std::string name;
  double measured = 0.0;
  std::string comparison;  // human-readable bound, e.g. "<= 1e-9"
  bool hard = true;        // hard failures flip the exit status
  bool pass = false;
  std::string note;
};

struct CheckConfig {
  std::size_t modes = 128;
  double final_time = 0.2;
  int resonance_cap = 24;
  int threads = 1;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool pass = true;  // all hard items passed
};

/// Full invariant suite: transform identities, symbol bounds, conservation,
/// reversibility, scaling consistency, resonance floors.
CheckReport run_check(const CheckConfig& config);

}  // namespace ilw
