#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ssn {

/// Operand dimensions disagree.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's documented precondition does not hold for its input.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Bouligand enumeration (or descriptor) is not available at this point
/// for the requested catalog kind.
class EnumerationUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The catalog kind cannot be used for the requested operation.
class UnsupportedKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular Newton matrix encountered with the safeguard disabled.
class NewtonBreakdown : public std::runtime_error {
 public:
  NewtonBreakdown(const std::string& what, Eigen::MatrixXd matrix)
      : std::runtime_error(what), matrix_(std::move(matrix)) {}

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(a) +
                            " does not match " + std::to_string(b));
  }
}

}  // namespace ssn
