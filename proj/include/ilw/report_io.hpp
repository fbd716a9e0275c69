#pragma once

#include <optional>
#include <string>

namespace ilw {

/// Shortest round-trip decimal form of a double (std::to_chars), so repeated
/// runs of the same binary serialize identically.
std::string format_double(double v);

/// "inf" for the limiting equation, shortest decimal otherwise.
std::string format_delta(const std::optional<double>& delta);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace ilw
