#pragma once

#include <stdexcept>
#include <string>

namespace forksched {

// Invalid parameters, malformed schedules, bad input files.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// An algorithm could not meet its accuracy or stability contract.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace forksched
