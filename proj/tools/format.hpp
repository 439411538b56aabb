#pragma once

#include <charconv>
#include <string>

namespace kode::cli {

// Shortest decimal form that round-trips the exact double. Used for every
// real the tool emits, so identical runs produce byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace kode::cli
