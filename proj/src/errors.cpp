#include "sament/errors.hpp"

#include <cstdio>
#include <string>

namespace sament {

namespace {

std::string budget_message(double log2_size, double budget) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "net size 2^%.6g exceeds budget M_max = %.6g", log2_size, budget);
  return buf;
}

}  // namespace

BudgetExceededError::BudgetExceededError(double log2_size, double budget)
    : UsageError(budget_message(log2_size, budget)), log2_size_(log2_size) {}

AmbientTooSmallError::AmbientTooSmallError(std::size_t required, std::size_t ambient)
    : UsageError("truncation dimension d = " + std::to_string(required) +
                 " exceeds ambient_dim = " + std::to_string(ambient)),
      required_(required) {}

}  // namespace sament
