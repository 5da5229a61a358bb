#pragma once

#include <stdexcept>
#include <string>

namespace sdsm {

// Bad tuning parameters or flag combinations. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable/malformed input or unwritable output. CLI maps this to exit code 3.
// Messages carry "path:line:" context where applicable.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sdsm
