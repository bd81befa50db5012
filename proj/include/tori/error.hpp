#pragma once

#include <stdexcept>
#include <string>

namespace tori {

// Every failure raised by the library derives from Error. The three concrete
// kinds map one-to-one onto the C API status codes and the CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or mathematically meaningless input supplied by the caller.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A request whose cochain spaces exceed the configured ceiling.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// An exactness violation or a failed cross-check: always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tori
