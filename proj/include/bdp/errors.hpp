#pragma once

#include <stdexcept>

namespace bdp {

// Input fails a documented precondition (e.g. a lifetime law requested
// for a chain whose boundary is not exit). CLI exit code 4.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical identity the implementation guarantees was violated
// beyond tolerance. CLI exit code 5.
struct IdentityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A verdict stayed inconclusive at the configured horizon. CLI exit code 3.
struct UndeterminedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bdp
