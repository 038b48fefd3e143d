#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace forksched {

// 10 significant digits, for human-facing printouts.
inline std::string format_sig10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Shortest representation that round-trips exactly; used in CSV cells.
inline std::string format_shortest(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace forksched
