#pragma once

#include <stdexcept>
#include <string>

namespace rotorkick {

// Invalid or inconsistent run configuration.  The command line tool maps
// this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to reach its accuracy target (basis too
// small, norm drift, ...).  The command line tool maps this to exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rotorkick
