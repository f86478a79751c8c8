#pragma once

#include <stdexcept>
#include <string>

namespace dysparse {

// Error categories; values match the CLI exit codes and the C API status codes.
enum class ErrorKind { Usage = 1, Data = 2, Numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& message) {
  throw Error(ErrorKind::Usage, message);
}

[[noreturn]] inline void throw_data(const std::string& message) {
  throw Error(ErrorKind::Data, message);
}

[[noreturn]] inline void throw_numeric(const std::string& message) {
  throw Error(ErrorKind::Numeric, message);
}

}  // namespace dysparse
