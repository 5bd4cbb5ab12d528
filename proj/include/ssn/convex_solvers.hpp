#pragma once

#include <vector>

#include "ssn/matrix_core.hpp"

namespace ssn {

/// Result of a nonnegative least-squares solve min ||A w - b||, w >= 0.
struct NnlsResult {
  Vector weights;
  double residual = 0.0;
};

/// Lawson-Hanson active-set NNLS. Exact up to round-off; terminates after a
/// finite number of passive-set changes (capped at 3 * cols iterations).
NnlsResult nnls(const Matrix& a, const Vector& b);

/// Minimum-norm point of conv{columns of P}.
struct MinNormPoint {
  Vector point;
  Vector weights;  // convex weights per column
};

/// Wolfe's minimum-norm-point algorithm (finite, active-set on the simplex).
MinNormPoint min_norm_point(const Matrix& points);

/// Euclidean projection onto {x : A x <= b} by a primal active-set method
/// started from a feasible point.
Vector project_onto_polyhedron(const Matrix& a, const Vector& b, const Vector& y,
                               const Vector& feasible);

/// Orthonormal basis of null(A) (A given by rows), as columns.
Matrix null_space_basis(const Matrix& rows, Eigen::Index n, double tol = 1e-10);

}  // namespace ssn
