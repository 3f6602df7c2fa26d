#pragma once

#include <stdexcept>
#include <string>

namespace lbfl {

enum class ErrorKind {
  malformed_input,        // bad file, bad ids, negative costs, broken metric
  infeasible,             // no solution exists for the request
  invalid_solution,       // a supplied solution breaks a hard constraint
  size_guard,             // instance exceeds a brute-force guard
  certificate_violation,  // a pipeline inequality failed (a bug, by construction)
  internal,
};

class LbflError : public std::runtime_error {
 public:
  LbflError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Always-on invariant check; these guard exact-arithmetic assumptions that
// must hold in release builds as well.
inline void require(bool cond, ErrorKind kind, const std::string& message) {
  if (!cond) throw LbflError(kind, message);
}

}  // namespace lbfl
