#pragma once

#include <stdexcept>
#include <string>

namespace tropos {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad argument, point
/// outside a domain, malformed input file).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach the resolution it promises: a zero
/// sits on the integration contour, an argument sum is not near an integer,
/// node doubling hit its cap.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace tropos
