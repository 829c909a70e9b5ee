#ifndef BLIFT_ERRORS_H_
#define BLIFT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blift {

// Bad or missing configuration: policy values, vocabularies, CLI options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stream or filesystem failure. `line` is 0 when no line position applies.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value violates a documented precondition or record invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One per-line problem found while reading a line-delimited input.
struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

}  // namespace blift

#endif  // BLIFT_ERRORS_H_
