#pragma once

#include <stdexcept>
#include <string>

namespace mmot {

struct InvalidDomain : std::runtime_error {
  explicit InvalidDomain(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct TensorTooLarge : std::runtime_error {
  explicit TensorTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasiblePlan : std::runtime_error {
  explicit InfeasiblePlan(const std::string& what) : std::runtime_error(what) {}
};

struct NotExchangeable : std::runtime_error {
  explicit NotExchangeable(const std::string& what) : std::runtime_error(what) {}
};

struct BlockStructureViolation : std::runtime_error {
  explicit BlockStructureViolation(const std::string& what) : std::runtime_error(what) {}
};

struct NotEquallyWeighted : std::runtime_error {
  explicit NotEquallyWeighted(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

struct Unsupported : std::runtime_error {
  explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmot
