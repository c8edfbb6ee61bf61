#pragma once

#include <stdexcept>
#include <string>

namespace tsra {

/// A caller broke a documented precondition, or a controller produced a
/// decision outside the feasible set. Always a bug upstream of the throw site.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent scenario configuration. `line()` is 0 when the
/// problem is not tied to a single line of the source file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline void require(bool condition, const char* what) {
  if (!condition) throw ContractViolation(what);
}

}  // namespace tsra
