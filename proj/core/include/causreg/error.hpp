#pragma once

#include <stdexcept>
#include <string>

namespace causreg {

// Error taxonomy mirrors the CLI exit codes: config (2), data (3), numeric (4).
// Anything thrown out of the library derives from Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace causreg
