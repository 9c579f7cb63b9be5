#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Invalid user-facing parameters. The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical invariant was violated at runtime (wraparound guard,
// unresolvable root scan). The CLI maps this to exit status 3.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwalk
