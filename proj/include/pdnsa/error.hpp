#pragma once

#include <stdexcept>
#include <string>

namespace pdnsa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file or stream could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected by validation (bad thresholds, overlapping lists, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An exact first-seen set hit its configured capacity.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// A share/CDF/top-N table was requested from a bundle with no entries in scope.
class EmptyBundle : public Error {
 public:
  using Error::Error;
};

class UnknownProfile : public Error {
 public:
  using Error::Error;
};

}  // namespace pdnsa
