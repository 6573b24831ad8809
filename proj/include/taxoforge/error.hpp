#pragma once

#include <stdexcept>
#include <string>

namespace taxoforge {

// Content or contract violation inside the pipeline (bad row, invalid rule set,
// inconsistent phase outputs).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment failure: missing file, unwritable path, unparsable config.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxoforge
