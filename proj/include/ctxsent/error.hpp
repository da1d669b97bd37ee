#pragma once

#include <stdexcept>
#include <string>

namespace ctxsent {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be read or parsed.
class InputError : public Error {
 public:
  using Error::Error;
};

// Training or evaluation could not proceed on the given data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxsent
