#pragma once

#include <stdexcept>
#include <string>

namespace wiretap {

/// Evaluation point outside the barrier domain (R or K not positive definite).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A KKT matrix failed to factor or is too ill-conditioned to trust.
class SingularKktError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Backtracking shrank the step below the minimum without meeting the
/// residual decrease test.
class LineSearchFailure : public std::runtime_error {
 public:
  LineSearchFailure(const std::string& what, double last_step, double residual_norm)
      : std::runtime_error(what), last_step_(last_step), residual_norm_(residual_norm) {}

  double last_step() const { return last_step_; }
  double residual_norm() const { return residual_norm_; }

 private:
  double last_step_;
  double residual_norm_;
};

}  // namespace wiretap
