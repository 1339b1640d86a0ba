#pragma once

#include <stdexcept>
#include <string>

namespace primegap {

// Argument outside an operation's domain (limit < 2, zero degree, odd sum, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request reaches past the sieved prime table.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Oracle inputs beyond the brute-force caps.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed cache, checkpoint, or text input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primegap
