#pragma once

#include <stdexcept>
#include <string>

namespace saa {

// Bad shapes, out-of-range parameters, non-finite data.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// File could not be read or written. The message carries the path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative routine produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace saa
