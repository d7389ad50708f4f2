#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lcm {

struct Span {
  int line = 0;
  int col = 0;
  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

enum class ErrorCode {
  UnusedLinear,
  ReusedLinear,
  LevelTooLow,
  LevelNotBelow,
  ArityMismatch,
  TypeMismatch,
  UnknownVariable,
  UnknownLabel,
  NonContractive,
  PayloadRecursion,
  DualityUndefined,
};

std::string_view to_string(ErrorCode code);

/// A rejected program or term. Every rejection carries exactly one code.
class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorCode code, Span span, std::string message)
      : std::runtime_error(message), code_(code), span_(span) {}

  ErrorCode code() const { return code_; }
  Span span() const { return span_; }
  /// `CODE at line:col — message`
  std::string render() const;

 private:
  ErrorCode code_;
  Span span_;
};

/// Renders one error per line, ordered by position.
std::string render_errors(std::vector<TypeError> errors);

}  // namespace lcm
