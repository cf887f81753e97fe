#pragma once

#include <stdexcept>
#include <string>

namespace mtm {

//! Thrown when an iterative evaluation (series, quadrature, fit) fails to
//! reach its tolerance within the configured budget.
struct NonConvergenceError : std::runtime_error {
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

//! Thrown when a sampled field violates a precondition of a functional
//! (e.g. support touching the grid boundary).
struct FieldContractError : std::invalid_argument {
  explicit FieldContractError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mtm
