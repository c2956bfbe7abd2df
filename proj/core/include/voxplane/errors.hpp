#pragma once

#include <stdexcept>

namespace voxplane {

/// Input file absent or unreadable.
struct MissingInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Config present but unparseable or out of range.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Output location cannot be created or written.
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace voxplane
