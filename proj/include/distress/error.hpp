#pragma once

#include <stdexcept>
#include <string>

namespace distress {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed data, bad labels, shape mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

// Solver/training failures (degenerate problems, non-convergence, NaN).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace distress
