#pragma once

#include <stdexcept>
#include <string>

namespace capdens {

/// Coarse failure class, mapped to CLI exit codes (config=1, numeric=2, io=3).
enum class ErrorKind { config, numeric, io };

/// Error with a stable machine-readable code ("empty-domain", "ball-out-of-box", ...)
/// next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, std::string message)
      : std::runtime_error(code + ": " + message),
        kind_(kind),
        code_(std::move(code)),
        message_(std::move(message)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const char* code, const std::string& message) {
  throw Error(kind, code, message);
}

}  // namespace capdens
