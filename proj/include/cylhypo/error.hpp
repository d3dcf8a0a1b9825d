#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cylhypo {

/// Broad failure classes. The CLI maps them to exit codes.
enum class ErrorKind {
  Precondition,  // caller violated an operation's contract
  Refusal,       // the mathematics forbids the request (vanishing symbol, resonant fiber, ...)
  Usage,         // malformed configuration or arguments
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Stable machine-readable identifier, e.g. "degenerate_operator".
  const std::string& code() const noexcept { return code_; }

  /// Numeric context for machine-readable reports (e.g. a zero witness).
  const std::vector<std::pair<std::string, double>>& details() const noexcept { return details_; }
  Error& with(std::string key, double value) {
    details_.emplace_back(std::move(key), value);
    return *this;
  }

 private:
  ErrorKind kind_;
  std::string code_;
  std::vector<std::pair<std::string, double>> details_;
};

inline Error precondition_error(std::string code, const std::string& msg) {
  return Error(ErrorKind::Precondition, std::move(code), msg);
}

inline Error refusal(std::string code, const std::string& msg) {
  return Error(ErrorKind::Refusal, std::move(code), msg);
}

}  // namespace cylhypo
