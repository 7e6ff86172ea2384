#ifndef PATCHWORK_ERRORS_HPP_
#define PATCHWORK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace patchwork {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable/unwritable paths, short reads, failed writes.
class IoError : public Error {
 public:
  using Error::Error;
};

// File exists and is readable but its contents violate the format.
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

// Bad parameters, bad config keys/values, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InsufficientPointsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateGeometryError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace patchwork

#endif  // PATCHWORK_ERRORS_HPP_
