#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace textmix {

inline constexpr const char* kVersion = "0.1.0";

/// Raised for any data or precondition failure; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

// printf-style formatting into std::string.
inline std::string strfmt(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  int len = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  if (len < 0) {
    va_end(args);
    return {};
  }
  std::string out(static_cast<std::size_t>(len), '\0');
  std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  va_end(args);
  return out;
}

// Shortest decimal form that parses back to the same double.
inline std::string fmt_double(double v) {
  for (int prec = 1; prec < 17; ++prec) {
    std::string s = strfmt("%.*g", prec, v);
    if (std::strtod(s.c_str(), nullptr) == v) return s;
  }
  return strfmt("%.17g", v);
}

}  // namespace textmix
