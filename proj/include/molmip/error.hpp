#pragma once

#include <stdexcept>
#include <string>

namespace molmip {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A layer kind / graph-mode combination (or activation) that cannot be
/// written as a linear mixed-integer program.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class InfeasibleDesign : public Error {
 public:
  using Error::Error;
};

}  // namespace molmip
