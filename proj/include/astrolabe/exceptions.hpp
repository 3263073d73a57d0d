#pragma once

#include <stdexcept>
#include <string>

namespace astrolabe {

/// Broad failure category; the CLI maps each one to an exit code.
enum class ErrorCategory { configuration, domain, io };

class AstrolabeError : public std::runtime_error {
public:
  AstrolabeError(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

// Mathematical domain failures.

class DomainError : public AstrolabeError {
public:
  explicit DomainError(const std::string& what)
      : AstrolabeError(ErrorCategory::domain, what) {}
};

class CollinearPoints : public DomainError {
public:
  using DomainError::DomainError;
};

class TooFewPoints : public DomainError {
public:
  using DomainError::DomainError;
};

class CoincidentCircles : public DomainError {
public:
  using DomainError::DomainError;
};

class ArcticLatitude : public DomainError {
public:
  using DomainError::DomainError;
};

class OutsidePlate : public DomainError {
public:
  using DomainError::DomainError;
};

class UndefinedBearing : public DomainError {
public:
  using DomainError::DomainError;
};

class NoSolution : public DomainError {
public:
  using DomainError::DomainError;
};

class ScenarioInfeasible : public DomainError {
public:
  using DomainError::DomainError;
};

// Bad input data or configuration.

class ConfigError : public AstrolabeError {
public:
  explicit ConfigError(const std::string& what)
      : AstrolabeError(ErrorCategory::configuration, what) {}
};

class DuplicateStarName : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class UnknownKey : public ConfigError {
public:
  UnknownKey(const std::string& key, int line)
      : ConfigError("unknown configuration key '" + key + "' at line " +
                    std::to_string(line)),
        key_(key) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

class ParseError : public ConfigError {
public:
  ParseError(const std::string& source, int line, int column, const std::string& message)
      : ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                    ": " + message),
        line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

class IoError : public AstrolabeError {
public:
  explicit IoError(const std::string& what) : AstrolabeError(ErrorCategory::io, what) {}
};

}  // namespace astrolabe
