#pragma once

#include <stdexcept>
#include <string>

namespace walklab {

// Bad inputs: malformed files, invalid configs, shape mismatches.
// Maps to exit code 3 at the CLI / C API boundary.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite losses or gradients during training. Maps to exit code 2.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace walklab
