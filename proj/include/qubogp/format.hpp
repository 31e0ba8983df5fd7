// format.hpp - shortest round-trip number formatting
#pragma once

#include <charconv>
#include <string>

namespace qubogp {

// Shortest decimal string that parses back to the same double.
inline std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

}  // namespace qubogp
