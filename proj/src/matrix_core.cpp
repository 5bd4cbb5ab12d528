#include "ssn/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ssn/errors.hpp"

namespace ssn {

namespace {

constexpr double kAsymmetryTol = 1e-8;
constexpr double kOrthoTol = 1e-12;

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("SymMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) {
    throw PreconditionError("SymMatrix: dimension must be at least 1");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTol * scale) {
    throw PreconditionError("SymMatrix: asymmetry " + std::to_string(asym) +
                            " exceeds repair tolerance");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "SymMatrix::operator+");
  return SymMatrix(a.m_ + b.m_);
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "SymMatrix::operator-");
  return SymMatrix(a.m_ - b.m_);
}

SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

// ---------------------------------------------------------------------------

Subspace Subspace::full(Eigen::Index n) { return Subspace(n, Matrix::Identity(n, n)); }

Subspace Subspace::trivial(Eigen::Index n) { return Subspace(n, Matrix(n, 0)); }

Subspace Subspace::from_orthonormal(const Matrix& basis) {
  const Eigen::Index k = basis.cols();
  const Matrix gram = basis.transpose() * basis;
  if (k > 0 && (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > kOrthoTol) {
    throw PreconditionError("Subspace: basis is not orthonormal");
  }
  return Subspace(basis.rows(), basis);
}

Matrix Subspace::projector() const {
  if (is_trivial()) return Matrix::Zero(n_, n_);
  return basis_ * basis_.transpose();
}

Vector Subspace::project(const Vector& v) const {
  require_same_dim(v.size(), n_, "Subspace::project");
  if (is_trivial()) return Vector::Zero(n_);
  return basis_ * (basis_.transpose() * v);
}

double Subspace::residual(const Vector& v) const { return (v - project(v)).norm(); }

bool Subspace::contains(const Vector& v, double tol) const { return residual(v) <= tol; }

bool Subspace::contains(const Subspace& other, double tol) const {
  require_same_dim(other.n_, n_, "Subspace::contains");
  for (Eigen::Index j = 0; j < other.dim(); ++j) {
    if (!contains(Vector(other.basis_.col(j)), tol)) return false;
  }
  return true;
}

Subspace Subspace::orthogonal_complement() const {
  Matrix candidates = Matrix::Identity(n_, n_) - projector();
  return orthonormalize(candidates, 1e-8);
}

// ---------------------------------------------------------------------------

EigenDecomposition jacobi_eigen(const SymMatrix& m) {
  const Eigen::Index n = m.dim();
  Matrix a = m.mat();
  Matrix v = Matrix::Identity(n, n);
  const double total = a.norm();
  const double target = 1e-13 * total;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && total > 0.0; ++sweep) {
    if (off_norm() <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Symmetric Schur rotation zeroing a(p,q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& m) { return jacobi_eigen(m).values(0); }

double max_eigenvalue(const SymMatrix& m) {
  const auto e = jacobi_eigen(m);
  return e.values(e.values.size() - 1);
}

double spectral_norm(const SymMatrix& m) {
  const auto e = jacobi_eigen(m);
  return e.values.cwiseAbs().maxCoeff();
}

Subspace orthonormalize(const Matrix& columns, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("orthonormalize: tol must be positive");
  const Eigen::Index n = columns.rows();
  std::vector<Vector> kept;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Vector w = columns.col(j);
    const double scale = std::max(1.0, w.norm());
    // Two Gram-Schmidt passes keep the basis orthogonal to round-off.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : kept) w -= b.dot(w) * b;
    }
    const double r = w.norm();
    if (r > tol * scale) kept.push_back(w / r);
  }
  Matrix basis(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = kept[j];
  return Subspace::from_orthonormal(basis);
}

Subspace orthonormalize(std::span<const Vector> vectors, double tol) {
  if (vectors.empty()) throw PreconditionError("orthonormalize: need at least one vector to fix n");
  const Eigen::Index n = vectors.front().size();
  Matrix cols(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_same_dim(vectors[j].size(), n, "orthonormalize");
    cols.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return orthonormalize(cols, tol);
}

double min_eig_on_subspace(const SymMatrix& m, const Subspace& s) {
  require_same_dim(m.dim(), s.ambient_dim(), "min_eig_on_subspace");
  if (s.is_trivial()) return std::numeric_limits<double>::infinity();
  const Matrix& b = s.basis();
  return min_eigenvalue(SymMatrix(b.transpose() * m.mat() * b));
}

double psd_margin(const SymMatrix& m1, const SymMatrix& m2) { return min_eigenvalue(m1 - m2); }

bool psd_order(const SymMatrix& m1, const SymMatrix& m2, double tol) {
  return psd_margin(m1, m2) >= -tol;
}

Subspace range_of(const SymMatrix& m, double tol) {
  const auto e = jacobi_eigen(m);
  const Eigen::Index n = m.dim();
  const double lmax = e.values(n - 1);
  const double neg_tol = std::max(tol * std::max(1.0, std::abs(lmax)), 1e-12);
  if (e.values(0) < -neg_tol) {
    throw PreconditionError("range_of: matrix is not positive semidefinite (lambda_min = " +
                            std::to_string(e.values(0)) + ")");
  }
  const double cut = std::max(tol * lmax, 1e-12);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < n; ++k)
    if (e.values(k) > cut) cols.push_back(k);
  Matrix basis(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    basis.col(static_cast<Eigen::Index>(j)) = e.vectors.col(cols[j]);
  return Subspace::from_orthonormal(basis);
}

SymMatrix compress(const SymMatrix& m, const Subspace& s) {
  require_same_dim(m.dim(), s.ambient_dim(), "compress");
  const Matrix p = s.projector();
  return SymMatrix(p * m.mat() * p);
}

SymMatrix spd_inverse(const SymMatrix& m) {
  const auto e = jacobi_eigen(m);
  if (e.values(0) <= 0.0) throw PreconditionError("spd_inverse: matrix is not positive definite");
  const Vector inv = e.values.cwiseInverse();
  return SymMatrix(e.vectors * inv.asDiagonal() * e.vectors.transpose());
}

SymMatrix CoreDecomposition::reconstruct() const {
  const Eigen::Index n = core.dim();
  const Matrix lifted = Matrix::Identity(n, n) + tau * core.mat();
  const Matrix inv = lifted.ldlt().solve(Matrix::Identity(n, n));
  const Matrix p = range.projector();
  return SymMatrix(p * inv * p);
}

CoreDecomposition core_decompose(const SymMatrix& d, double tau, double rho, double rank_tol) {
  if (!(tau > 0.0)) throw PreconditionError("core_decompose: tau must be positive");
  if (!(rho >= 0.0) || !(tau * rho < 1.0)) {
    throw PreconditionError("core_decompose: need rho >= 0 and tau*rho < 1");
  }
  constexpr double kBandTol = 1e-10;
  const double upper = 1.0 / (1.0 - tau * rho);
  const auto e = jacobi_eigen(d);
  const Eigen::Index n = d.dim();
  if (e.values(0) < -kBandTol) {
    throw PreconditionError("core_decompose: negative eigenvalue " + std::to_string(e.values(0)));
  }
  if (e.values(n - 1) > upper + kBandTol) {
    throw PreconditionError("core_decompose: eigenvalue " + std::to_string(e.values(n - 1)) +
                            " exceeds 1/(1 - tau*rho)");
  }
  const double cut = std::max(rank_tol * e.values(n - 1), 1e-12);
  std::vector<Eigen::Index> pos;
  for (Eigen::Index k = 0; k < n; ++k)
    if (e.values(k) > cut) pos.push_back(k);

  const auto r = static_cast<Eigen::Index>(pos.size());
  Matrix u(n, r);
  Vector shifted(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    u.col(j) = e.vectors.col(pos[static_cast<std::size_t>(j)]);
    shifted(j) = 1.0 / e.values(pos[static_cast<std::size_t>(j)]) - 1.0;
  }
  CoreDecomposition out;
  out.range = Subspace::from_orthonormal(u);
  out.core = SymMatrix((1.0 / tau) * u * shifted.asDiagonal() * u.transpose());
  out.tau = tau;
  return out;
}

}  // namespace ssn
