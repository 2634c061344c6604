#pragma once

#include <stdexcept>
#include <string>

namespace wsptm {

// Bad user input: malformed files, unknown keys, invalid parameter ranges.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint problems: unreadable file, version or vocabulary mismatch.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown or a broken internal invariant.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wsptm
