#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metriq {

enum class ErrorKind {
  Domain,
  Pole,
  Overflow,
  NonConvergence,
  Syntax,
  UnknownIdentifier,
  Step,
  Divergence,
  SeriesBlowup,
  ToleranceNotMet,
  InsufficientPoints,
  Config,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownIdentifier: return "unknown_identifier";
    case ErrorKind::Step: return "step";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::SeriesBlowup: return "series_blowup";
    case ErrorKind::ToleranceNotMet: return "tolerance_not_met";
    case ErrorKind::InsufficientPoints: return "insufficient_points";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

// Base of every error raised by the library. The kind is what callers branch on;
// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::Domain, m) {}
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& m) : Error(ErrorKind::Pole, m) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& m) : Error(ErrorKind::Overflow, m) {}
};

class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(const std::string& m)
      : Error(ErrorKind::NonConvergence, m) {}
};

// Parse failures carry the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& m, std::size_t offset)
      : Error(ErrorKind::Syntax, m + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public Error {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : Error(ErrorKind::UnknownIdentifier,
              "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class StepError : public Error {
 public:
  explicit StepError(const std::string& m) : Error(ErrorKind::Step, m) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& m) : Error(ErrorKind::Divergence, m) {}
};

class SeriesBlowupError : public Error {
 public:
  explicit SeriesBlowupError(const std::string& m) : Error(ErrorKind::SeriesBlowup, m) {}
};

class ToleranceNotMetError : public Error {
 public:
  explicit ToleranceNotMetError(const std::string& m)
      : Error(ErrorKind::ToleranceNotMet, m) {}
};

class InsufficientPointsError : public Error {
 public:
  explicit InsufficientPointsError(const std::string& m)
      : Error(ErrorKind::InsufficientPoints, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorKind::Config, m) {}
};

}  // namespace metriq
