#pragma once

#include <stdexcept>
#include <string>

namespace rtm {

/// Bad input: parameters, configurations, incompatible objects.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical stage failed (singular system, Krylov stagnation).
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File access or container format problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rtm
