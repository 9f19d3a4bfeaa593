#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sament {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad argument, bad config).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Net construction would exceed the configured center budget.
class BudgetExceededError : public UsageError {
 public:
  BudgetExceededError(double log2_size, double budget);

  double log2_size() const noexcept { return log2_size_; }

 private:
  double log2_size_;
};

/// The truncation dimension demanded by the tail model exceeds the ambient dimension.
class AmbientTooSmallError : public UsageError {
 public:
  AmbientTooSmallError(std::size_t required, std::size_t ambient);

  std::size_t required_dim() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// Input data carries no usable information (e.g. all-zero samples).
class DegenerateInputError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// An internal invariant failed. Always a bug or an astronomically unlikely event.
class InternalError : public Error {
 public:
  using Error::Error;
};

#define SAMENT_REQUIRE(cond, msg)                \
  do {                                           \
    if (!(cond)) throw ::sament::UsageError(msg); \
  } while (0)

#define SAMENT_ASSERT(cond, msg)                    \
  do {                                              \
    if (!(cond)) throw ::sament::InternalError(msg); \
  } while (0)

}  // namespace sament
