#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfg1d {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested truncation order cannot be resolved on the sampling grid.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a mathematical function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Coefficient point outside the feasibility cone.
class InfeasiblePoint : public Error {
 public:
  InfeasiblePoint(const std::string& what, double min_w)
      : Error(what), min_w_(min_w) {}
  double min_w() const { return min_w_; }

 private:
  double min_w_;
};

/// The unit-mass normalization for a_0 did not converge.
class OmegaSolveError : public Error {
 public:
  OmegaSolveError(const std::string& what, double lower, double upper,
                  double residual)
      : Error(what), lower_(lower), upper_(upper), residual_(residual) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double residual() const { return residual_; }

 private:
  double lower_;
  double upper_;
  double residual_;
};

class NonSymmetricKernel : public Error {
 public:
  using Error::Error;
};

struct KernelViolation {
  std::size_t index;  // cosine index k of the offending coefficient p_k
  double value;
};

/// Kernel violates p_0 > 0 or p_k >= 0.
class InadmissibleKernel : public Error {
 public:
  InadmissibleKernel(const std::string& what,
                     std::vector<KernelViolation> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<KernelViolation>& violations() const { return violations_; }

 private:
  std::vector<KernelViolation> violations_;
};

/// A stage of the general-kernel pipeline failed to converge.
class StageError : public Error {
 public:
  StageError(const std::string& what, std::size_t stage, std::size_t order)
      : Error(what), stage_(stage), order_(order) {}
  std::size_t stage() const { return stage_; }
  std::size_t order() const { return order_; }

 private:
  std::size_t stage_;
  std::size_t order_;
};

}  // namespace mfg1d
