#pragma once

#include <stdexcept>
#include <string>

namespace vf {

/// Failure category. The CLI maps each kind to its own exit code.
enum class ErrorKind { usage = 1, data = 2, backend = 3, io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ErrorKind::backend, what) {}
};

/// The remote side answered, but not in the shape the wire protocol requires.
class ProtocolError : public BackendError {
 public:
  explicit ProtocolError(const std::string& what) : BackendError(what) {}
};

}  // namespace vf
