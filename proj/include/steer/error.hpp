#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace steer {

enum class ErrorKind {
  Dimension,    // incompatible shapes
  Validation,   // input violates a documented invariant
  Size,         // configured size cap exceeded
  Convergence,  // iterative routine did not converge
  Unsupported,  // valid request outside the implemented range
  NoAdvantage,  // input is unsteerable, no advantage construction exists
  Parse,        // malformed JSON / schema mismatch
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Short decimal form for messages, e.g. "2.07e-08".
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace steer
