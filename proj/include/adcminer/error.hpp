#pragma once

#include <stdexcept>
#include <string>

namespace adcminer {

/// Invalid user-supplied parameters (bad flag values, out-of-range thresholds).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with the input data: IO failures, malformed CSV, too few tuples.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adcminer
