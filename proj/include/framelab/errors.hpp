#pragma once

#include <stdexcept>
#include <string>

namespace framelab {

// Malformed user input: bad files, bad parameters, dimension mismatches.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical precondition violations: singular operators, non-tight measures,
// degenerate denominators, iteration caps. The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace framelab
