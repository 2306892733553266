#pragma once

#include <stdexcept>
#include <string>

namespace qvar {

// Every typed failure raised by the library derives from Error so callers can
// catch the family at once.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class PointNotOnVariety : public Error {
  public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class PoleAtLatticePoint : public Error {
  public:
    using Error::Error;
};

class InsufficientResolution : public Error {
  public:
    using Error::Error;
};

class NoConvergence : public Error {
  public:
    using Error::Error;
};

class GradientUnavailable : public Error {
  public:
    using Error::Error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

} // namespace qvar
