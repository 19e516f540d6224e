#pragma once

#include <stdexcept>
#include <string>

namespace coherent {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Caller supplied an out-of-range parameter or a malformed object.
class InvalidParameter : public Error {
  public:
    using Error::Error;
};

// Model does not satisfy P(A) = 1/2 and the level-balance identity.
class NotInCprime : public Error {
  public:
    using Error::Error;
};

// Step pair fails one of the Lambda(k) conditions.
class NotInLambda : public Error {
  public:
    using Error::Error;
};

// Ratio or tree query on an object with no mass where mass is required.
class Degenerate : public Error {
  public:
    using Error::Error;
};

// A proven invariant failed. Always a bug in this library.
class InternalInvariant : public Error {
  public:
    using Error::Error;
};

}  // namespace coherent
