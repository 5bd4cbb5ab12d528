#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ssn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Construction averages the input with its
/// transpose; asymmetry larger than 1e-8 (relative to the entry scale) is
/// rejected instead of repaired.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Eigen::Index n);
  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(const Vector& d);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  Matrix m_;
};

/// Linear subspace of R^n stored as an orthonormal basis (n x k, k may be 0).
class Subspace {
 public:
  Subspace() = default;

  static Subspace full(Eigen::Index n);
  static Subspace trivial(Eigen::Index n);
  /// Wraps a basis that is already orthonormal (checked to 1e-12).
  static Subspace from_orthonormal(const Matrix& basis);

  Eigen::Index ambient_dim() const { return n_; }
  Eigen::Index dim() const { return basis_.cols(); }
  bool is_trivial() const { return basis_.cols() == 0; }
  const Matrix& basis() const { return basis_; }

  Matrix projector() const;
  Vector project(const Vector& v) const;
  /// Distance of v from the subspace.
  double residual(const Vector& v) const;
  bool contains(const Vector& v, double tol) const;
  /// Containment of another subspace: every basis vector of `other` lies in
  /// this subspace within tol.
  bool contains(const Subspace& other, double tol) const;
  Subspace orthogonal_complement() const;

 private:
  Subspace(Eigen::Index n, Matrix basis) : n_(n), basis_(std::move(basis)) {}

  Eigen::Index n_ = 0;
  Matrix basis_;
};

/// Eigenpairs with eigenvalues in ascending order; column i of `vectors`
/// belongs to values[i].
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius norm
/// drops below 1e-13 * ||M||_F.
EigenDecomposition jacobi_eigen(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

Subspace orthonormalize(std::span<const Vector> vectors, double tol = 1e-10);
Subspace orthonormalize(const Matrix& columns, double tol = 1e-10);

/// Smallest eigenvalue of B^T M B for an orthonormal basis B of S.
/// Returns +infinity when S = {0}: the quadratic-form condition is vacuous.
double min_eig_on_subspace(const SymMatrix& m, const Subspace& s);

/// lambda_min(M1 - M2); the measured margin behind psd_order.
double psd_margin(const SymMatrix& m1, const SymMatrix& m2);
/// M1 >= M2 in the Loewner order, up to tol.
bool psd_order(const SymMatrix& m1, const SymMatrix& m2, double tol = 1e-9);

/// Span of the eigenvectors of a PSD matrix with eigenvalue above
/// tol * lambda_max (floor 1e-12). Throws PreconditionError if M has an
/// eigenvalue below -max(tol * max(1, |lambda_max|), 1e-12).
Subspace range_of(const SymMatrix& m, double tol = 1e-10);

/// D = Pi_R (I + tau*core)^{-1} Pi_R with range(core) inside R = range(D).
struct CoreDecomposition {
  Subspace range;
  SymMatrix core;
  double tau = 1.0;

  SymMatrix reconstruct() const;
};

/// Builds core = (1/tau) U (Lambda^{-1} - I) U^T from the positive eigenpairs
/// (U, Lambda) of D. Requires 0 <= D <= 1/(1 - tau*rho) I within 1e-10.
CoreDecomposition core_decompose(const SymMatrix& d, double tau, double rho = 0.0,
                                 double rank_tol = 1e-10);

/// Pi_S M Pi_S.
SymMatrix compress(const SymMatrix& m, const Subspace& s);

/// Inverse of a symmetric positive definite matrix via its eigenpairs.
SymMatrix spd_inverse(const SymMatrix& m);

/// Spectral norm of a symmetric matrix.
double spectral_norm(const SymMatrix& m);

}  // namespace ssn
