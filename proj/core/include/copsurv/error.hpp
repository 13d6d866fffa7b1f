#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace copsurv {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter or argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Covariate or layer dimensions that do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed input data or configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A metric whose value is undefined on the given data (no comparable pairs, ...).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite likelihood, gradient or parameter.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what,
                            std::optional<std::size_t> record = std::nullopt)
      : Error(what), record_(record) {}

  std::optional<std::size_t> record_index() const { return record_; }

 private:
  std::optional<std::size_t> record_;
};

// Process exit codes shared by every CLI subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
  kExitIo = 3,
};

}  // namespace copsurv
