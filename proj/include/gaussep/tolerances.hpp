#pragma once

#include <stdexcept>
#include <string>

namespace gaussep {

/// Numerical bands used by every verdict in the library.
///
/// `psd` is relative to the spectral norm of the matrix under test, `alg`
/// bounds algebraic identities (symplecticity, Williamson residuals, mean
/// identities), and `verdict` is the band inside which a decision is refused.
struct Tolerances {
  double psd = 1e-9;
  double alg = 1e-8;
  double verdict = 1e-7;
};

/// Raised when a matrix that must be inverted is singular within tolerance.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace gaussep
