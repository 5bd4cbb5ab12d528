#include "ssn/convex_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssn/errors.hpp"

namespace ssn {

namespace {

Matrix select_columns(const Matrix& a, const std::vector<Eigen::Index>& cols) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
  return out;
}

Matrix select_rows(const Matrix& a, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
  return out;
}

}  // namespace

Matrix null_space_basis(const Matrix& rows, Eigen::Index n, double tol) {
  if (rows.rows() == 0) return Matrix::Identity(n, n);
  require_same_dim(rows.cols(), n, "null_space_basis");
  const Subspace row_space = orthonormalize(Matrix(rows.transpose()), tol);
  return row_space.orthogonal_complement().basis();
}

NnlsResult nnls(const Matrix& a, const Vector& b) {
  require_same_dim(a.rows(), b.size(), "nnls");
  const Eigen::Index m = a.cols();
  Vector w = Vector::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  const double tol = 1e-13 * std::max(1.0, a.norm() * std::max(1.0, b.norm()));

  auto passive_list = [&]() {
    std::vector<Eigen::Index> p;
    for (Eigen::Index j = 0; j < m; ++j)
      if (passive[static_cast<std::size_t>(j)]) p.push_back(j);
    return p;
  };

  const int max_outer = static_cast<int>(3 * m + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Vector g = a.transpose() * (b - a * w);
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && g(j) > best) {
        best = g(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      const auto p = passive_list();
      const Matrix ap = select_columns(a, p);
      const Vector sp = ap.completeOrthogonalDecomposition().solve(b);
      Vector s = Vector::Zero(m);
      for (std::size_t k = 0; k < p.size(); ++k) s(p[k]) = sp(static_cast<Eigen::Index>(k));

      bool all_positive = true;
      for (auto j : p) all_positive = all_positive && s(j) > 0.0;
      if (all_positive) {
        w = s;
        break;
      }
      double alpha = 1.0;
      for (auto j : p) {
        if (s(j) <= 0.0) alpha = std::min(alpha, w(j) / (w(j) - s(j)));
      }
      w += alpha * (s - w);
      for (auto j : p) {
        if (w(j) <= 1e-15) {
          w(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
  }
  return {w, (a * w - b).norm()};
}

MinNormPoint min_norm_point(const Matrix& points) {
  const Eigen::Index m = points.cols();
  if (m == 0) throw PreconditionError("min_norm_point: empty point set");
  const double scale = std::max(1.0, points.colwise().squaredNorm().maxCoeff());
  constexpr double kZ1 = 1e-12;
  constexpr double kZ2 = 1e-12;
  constexpr double kZ3 = 1e-12;

  Eigen::Index start = 0;
  points.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> s{start};
  Vector lambda = Vector::Zero(m);
  lambda(start) = 1.0;
  Vector x = points.col(start);

  for (int major = 0; major < 1000; ++major) {
    Eigen::Index j = 0;
    (points.transpose() * x).minCoeff(&j);
    if (x.squaredNorm() - x.dot(points.col(j)) <= kZ1 * scale) break;
    if (std::find(s.begin(), s.end(), j) != s.end()) break;
    s.push_back(j);

    for (int minor = 0; minor < 1000; ++minor) {
      // Affine minimizer over the current corral via its KKT system.
      const auto k = static_cast<Eigen::Index>(s.size());
      const Matrix ps = select_columns(points, s);
      Matrix kkt = Matrix::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = ps.transpose() * ps;
      kkt.block(0, k, k, 1).setOnes();
      kkt.block(k, 0, 1, k).setOnes();
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Vector mu = sol.head(k);

      if (mu.minCoeff() > kZ2) {
        lambda.setZero();
        for (Eigen::Index i = 0; i < k; ++i) lambda(s[static_cast<std::size_t>(i)]) = mu(i);
        x = points * lambda;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double li = lambda(s[static_cast<std::size_t>(i)]);
        if (mu(i) <= kZ2 && li - mu(i) > 0.0) theta = std::min(theta, li / (li - mu(i)));
      }
      for (Eigen::Index i = 0; i < k; ++i) {
        auto& li = lambda(s[static_cast<std::size_t>(i)]);
        li = li + theta * (mu(i) - li);
      }
      std::vector<Eigen::Index> kept;
      for (auto idx : s) {
        if (lambda(idx) > kZ3) {
          kept.push_back(idx);
        } else {
          lambda(idx) = 0.0;
        }
      }
      s = kept;
      lambda /= lambda.sum();
      x = points * lambda;
    }
  }
  return {x, lambda};
}

Vector project_onto_polyhedron(const Matrix& a, const Vector& b, const Vector& y,
                               const Vector& feasible) {
  const Eigen::Index n = y.size();
  require_same_dim(a.cols(), n, "project_onto_polyhedron");
  require_same_dim(feasible.size(), n, "project_onto_polyhedron");
  const Eigen::Index m = a.rows();
  const double scale = std::max({1.0, y.cwiseAbs().maxCoeff(), feasible.cwiseAbs().maxCoeff(),
                                 b.size() ? b.cwiseAbs().maxCoeff() : 0.0});
  const double feas_tol = 1e-10 * scale;

  Vector x = feasible;
  if (m > 0 && (a * x - b).maxCoeff() > feas_tol) {
    throw PreconditionError("project_onto_polyhedron: start point is infeasible");
  }

  // Working set: linearly independent active constraints.
  std::vector<Eigen::Index> work;
  auto independent_of_work = [&](Eigen::Index i) {
    if (work.empty()) return a.row(i).norm() > 0.0;
    const Subspace rs = orthonormalize(Matrix(select_rows(a, work).transpose()), 1e-10);
    return rs.residual(Vector(a.row(i).transpose())) > 1e-9 * a.row(i).norm();
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(a.row(i).dot(x) - b(i)) <= feas_tol && independent_of_work(i)) work.push_back(i);
  }

  for (int iter = 0; iter < 10000; ++iter) {
    const Matrix aw = select_rows(a, work);
    const Matrix nb = null_space_basis(aw, n);
    const Vector p = nb * (nb.transpose() * (y - x));

    if (p.norm() <= 1e-14 * scale) {
      if (work.empty()) return x;
      // Multipliers from A_W^T mu = y - x.
      const Vector mu = aw.transpose().completeOrthogonalDecomposition().solve(y - x);
      Eigen::Index drop = -1;
      for (Eigen::Index k = 0; k < mu.size(); ++k) {
        if (mu(k) < -1e-12 * scale) {
          drop = k;  // first negative multiplier (Bland-style)
          break;
        }
      }
      if (drop < 0) return x;
      work.erase(work.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end()) continue;
      const double ap = a.row(i).dot(p);
      if (ap > 1e-15 * a.row(i).norm() * p.norm()) {
        const double step = std::max(0.0, (b(i) - a.row(i).dot(x)) / ap);
        if (step < alpha) {
          alpha = step;
          blocking = i;
        }
      }
    }
    x += alpha * p;
    if (blocking >= 0) work.push_back(blocking);
  }
  throw std::runtime_error("project_onto_polyhedron: active-set iteration did not terminate");
}

}  // namespace ssn
