#include "ssn/polyhedral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "ssn/convex_solvers.hpp"
#include "ssn/errors.hpp"

namespace ssn {

namespace {

constexpr Eigen::Index kMaxFacetDim = 6;

double binomial(Eigen::Index m, Eigen::Index k) {
  if (k < 0 || k > m) return 0.0;
  double r = 1.0;
  for (Eigen::Index i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
  return r;
}

// Calls visit(subset) for every k-subset of {0..m-1} in lexicographic order.
void for_each_subset(Eigen::Index m, Eigen::Index k,
                     const std::function<void(const std::vector<Eigen::Index>&)>& visit) {
  if (k > m || k < 0) return;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    Eigen::Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

bool near_duplicate(const std::vector<Vector>& pool, const Vector& v, double tol) {
  return std::any_of(pool.begin(), pool.end(),
                     [&](const Vector& w) { return (w - v).norm() <= tol; });
}

// Rays c (unit, in R^d) of the pointed cone {c : G c <= 0}.
std::vector<Vector> extreme_rays(const Matrix& g) {
  const Eigen::Index d = g.cols();
  const Eigen::Index m = g.rows();
  std::vector<Vector> rays;
  auto try_candidate = [&](Vector c) {
    c.normalize();
    for (double sign : {1.0, -1.0}) {
      const Vector cs = sign * c;
      if (m == 0 || (g * cs).maxCoeff() <= 1e-10) {
        if (!near_duplicate(rays, cs, 1e-9)) rays.push_back(cs);
      }
    }
  };
  if (d == 1) {
    try_candidate(Vector::Ones(1));
    return rays;
  }
  if (binomial(m, d - 1) > 2e6) throw PreconditionError("extreme_rays: too many constraint subsets");
  for_each_subset(m, d - 1, [&](const std::vector<Eigen::Index>& rows) {
    Matrix r(d - 1, d);
    for (Eigen::Index i = 0; i < d - 1; ++i) r.row(i) = g.row(rows[static_cast<std::size_t>(i)]);
    const Matrix nb = null_space_basis(r, d);
    if (nb.cols() == 1) try_candidate(nb.col(0));
  });
  return rays;
}

}  // namespace

// ---------------------------------------------------------------------------

PolyhedralCone PolyhedralCone::zero(Eigen::Index n) {
  PolyhedralCone c;
  c.n_ = n;
  c.lineality_ = Subspace::trivial(n);
  return c;
}

PolyhedralCone PolyhedralCone::whole(Eigen::Index n) {
  PolyhedralCone c;
  c.n_ = n;
  c.lineality_ = Subspace::full(n);
  return c;
}

PolyhedralCone PolyhedralCone::from_generators(Eigen::Index n, const std::vector<Vector>& generators,
                                               const Subspace* lineality) {
  for (const auto& g : generators) require_same_dim(g.size(), n, "PolyhedralCone::from_generators");
  const Eigen::Index lin_dim = lineality ? lineality->dim() : 0;

  Matrix all(n, static_cast<Eigen::Index>(generators.size()) + 2 * lin_dim);
  for (std::size_t j = 0; j < generators.size(); ++j) all.col(static_cast<Eigen::Index>(j)) = generators[j];
  for (Eigen::Index j = 0; j < lin_dim; ++j) {
    all.col(static_cast<Eigen::Index>(generators.size()) + 2 * j) = lineality->basis().col(j);
    all.col(static_cast<Eigen::Index>(generators.size()) + 2 * j + 1) = -lineality->basis().col(j);
  }

  std::vector<Vector> lin_vectors;
  for (Eigen::Index j = 0; j < lin_dim; ++j) lin_vectors.push_back(lineality->basis().col(j));
  for (const auto& g : generators) {
    if (g.norm() == 0.0) continue;
    const auto res = nnls(all, -g);
    if (res.residual <= 1e-10 * std::max(1.0, g.norm())) lin_vectors.push_back(g);
  }

  PolyhedralCone c;
  c.n_ = n;
  c.lineality_ = lin_vectors.empty() ? Subspace::trivial(n) : orthonormalize(std::span<const Vector>(lin_vectors), 1e-10);
  for (const auto& g : generators) {
    Vector r = g - c.lineality_.project(g);
    const double nr = r.norm();
    if (nr <= 1e-12 * std::max(1.0, g.norm())) continue;
    r /= nr;
    if (!near_duplicate(c.generators_, r, 1e-10)) c.generators_.push_back(r);
  }
  return c;
}

PolyhedralCone PolyhedralCone::from_inequalities(const Matrix& g, Eigen::Index n) {
  if (g.rows() == 0) return whole(n);
  require_same_dim(g.cols(), n, "PolyhedralCone::from_inequalities");
  const Matrix lin_basis = null_space_basis(g, n);
  const Subspace lin = Subspace::from_orthonormal(lin_basis);
  const Matrix e = lin.orthogonal_complement().basis();

  PolyhedralCone c;
  c.n_ = n;
  c.lineality_ = lin;
  if (e.cols() == 0) return c;
  for (const Vector& ray : extreme_rays(g * e)) {
    Vector lifted = e * ray;
    lifted.normalize();
    if (!near_duplicate(c.generators_, lifted, 1e-10)) c.generators_.push_back(lifted);
  }
  return c;
}

Matrix PolyhedralCone::generator_matrix() const {
  const Eigen::Index l = lineality_.dim();
  Matrix out(n_, static_cast<Eigen::Index>(generators_.size()) + 2 * l);
  for (std::size_t j = 0; j < generators_.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = generators_[j];
  for (Eigen::Index j = 0; j < l; ++j) {
    out.col(static_cast<Eigen::Index>(generators_.size()) + 2 * j) = lineality_.basis().col(j);
    out.col(static_cast<Eigen::Index>(generators_.size()) + 2 * j + 1) = -lineality_.basis().col(j);
  }
  return out;
}

bool PolyhedralCone::contains(const Vector& v, double tol) const {
  require_same_dim(v.size(), n_, "PolyhedralCone::contains");
  const Matrix gm = generator_matrix();
  if (gm.cols() == 0) return v.norm() <= tol;
  return nnls(gm, v).residual <= tol * std::max(1.0, v.norm());
}

Subspace PolyhedralCone::span() const {
  const Matrix gm = generator_matrix();
  if (gm.cols() == 0) return Subspace::trivial(n_);
  return orthonormalize(gm, 1e-10);
}

PolyhedralCone PolyhedralCone::polar() const {
  const Matrix gm = generator_matrix();
  return from_inequalities(Matrix(gm.transpose()), n_);
}

// ---------------------------------------------------------------------------

Polyhedron Polyhedron::from_inequalities(Matrix a, Vector b, Vector feasible_point) {
  require_same_dim(a.rows(), b.size(), "Polyhedron::from_inequalities");
  require_same_dim(a.cols(), feasible_point.size(), "Polyhedron::from_inequalities");
  Polyhedron p;
  p.a_ = std::move(a);
  p.b_ = std::move(b);
  p.feasible_ = std::move(feasible_point);
  if (!p.contains(p.feasible_)) throw PreconditionError("Polyhedron: supplied point is infeasible");
  return p;
}

Polyhedron Polyhedron::from_generators(const std::vector<Vector>& vertices,
                                       const std::vector<Vector>& rays) {
  if (vertices.empty()) throw PreconditionError("Polyhedron::from_generators: need a vertex");
  const Eigen::Index n = vertices.front().size();
  if (n > kMaxFacetDim) {
    throw PreconditionError("Polyhedron::from_generators: facet enumeration limited to n <= 6");
  }
  for (const auto& v : vertices) require_same_dim(v.size(), n, "Polyhedron::from_generators");
  for (const auto& r : rays) require_same_dim(r.size(), n, "Polyhedron::from_generators");

  // Homogenized generators (v, 1) and (r, 0).
  const auto m = static_cast<Eigen::Index>(vertices.size() + rays.size());
  Matrix h(n + 1, m);
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    h.col(static_cast<Eigen::Index>(j)) << vertices[j], 1.0;
  }
  for (std::size_t j = 0; j < rays.size(); ++j) {
    h.col(static_cast<Eigen::Index>(vertices.size() + j)) << rays[j], 0.0;
  }
  const Subspace span = orthonormalize(h, 1e-10);
  const Matrix e = span.basis();
  const Eigen::Index d = e.cols();

  std::vector<Vector> rows;
  std::vector<double> rhs;
  auto add_row = [&](const Vector& normal) {
    // normal^T (x, 1) <= 0  <=>  normal_x^T x <= -normal_t
    Vector ax = normal.head(n);
    double beta = -normal(n);
    const double s = ax.norm();
    if (s <= 1e-12) return;
    ax /= s;
    beta /= s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((rows[i] - ax).norm() <= 1e-9 && std::abs(rhs[i] - beta) <= 1e-9) return;
    }
    rows.push_back(ax);
    rhs.push_back(beta);
  };

  // Equalities from the orthogonal complement of the generator span.
  const Matrix comp = span.orthogonal_complement().basis();
  for (Eigen::Index j = 0; j < comp.cols(); ++j) {
    add_row(comp.col(j));
    add_row(-comp.col(j));
  }

  const Matrix hc = e.transpose() * h;  // d x m, full-dimensional cone
  // Facets of cone(hc): hyperplanes through d-1 independent generators with
  // every generator on one side.
  auto try_normal = [&](Vector c) {
    c.normalize();
    for (double sign : {1.0, -1.0}) {
      const Vector cs = sign * c;
      if ((hc.transpose() * cs).maxCoeff() <= 1e-10) add_row(e * cs);
    }
  };
  if (d == 1) {
    try_normal(Vector::Ones(1));
  } else {
    if (binomial(m, d - 1) > 2e6) throw PreconditionError("Polyhedron: too many generator subsets");
    for_each_subset(m, d - 1, [&](const std::vector<Eigen::Index>& cols) {
      Matrix r(d - 1, d);
      for (Eigen::Index i = 0; i < d - 1; ++i) r.row(i) = hc.col(cols[static_cast<std::size_t>(i)]).transpose();
      const Matrix nb = null_space_basis(r, d);
      if (nb.cols() == 1) try_normal(nb.col(0));
    });
  }

  Polyhedron p;
  p.a_.resize(static_cast<Eigen::Index>(rows.size()), n);
  p.b_.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.a_.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    p.b_(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  p.feasible_ = vertices.front();
  p.vertices_ = vertices;
  p.rays_ = rays;
  return p;
}

Polyhedron Polyhedron::box(const Vector& lower, const Vector& upper) {
  require_same_dim(lower.size(), upper.size(), "Polyhedron::box");
  const Eigen::Index n = lower.size();
  if ((upper - lower).minCoeff() < 0.0) throw PreconditionError("Polyhedron::box: empty box");
  Polyhedron p;
  p.a_.resize(2 * n, n);
  p.a_ << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  p.b_.resize(2 * n);
  p.b_ << upper, -lower;
  p.feasible_ = lower;
  if (n <= 12) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = ((mask >> i) & 1U) ? upper(i) : lower(i);
      if (!near_duplicate(p.vertices_, v, 0.0)) p.vertices_.push_back(v);
    }
  }
  return p;
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  require_same_dim(x.size(), dim(), "Polyhedron::contains");
  if (a_.rows() == 0) return true;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (a_ * x - b_).maxCoeff() <= tol * scale;
}

std::vector<Eigen::Index> Polyhedron::active_set(const Vector& x, double tol) const {
  require_same_dim(x.size(), dim(), "Polyhedron::active_set");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> act;
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    if (std::abs(a_.row(i).dot(x) - b_(i)) <= tol * scale) act.push_back(i);
  }
  return act;
}

Vector Polyhedron::project(const Vector& y) const {
  return project_onto_polyhedron(a_, b_, y, feasible_);
}

double Polyhedron::support(const Vector& x) const {
  require_same_dim(x.size(), dim(), "Polyhedron::support");
  if (vertices_.empty()) throw PreconditionError("Polyhedron::support: vertex list unknown");
  for (const auto& r : rays_) {
    if (r.dot(x) > 0.0) return std::numeric_limits<double>::infinity();
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) best = std::max(best, v.dot(x));
  return best;
}

// ---------------------------------------------------------------------------

PolyhedralCone tangent_cone(const Polyhedron& c, const Vector& x) {
  if (!c.contains(x)) throw PreconditionError("tangent_cone: point is not in the set");
  const auto act = c.active_set(x);
  Matrix g(static_cast<Eigen::Index>(act.size()), c.dim());
  for (std::size_t i = 0; i < act.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = c.a().row(act[i]);
  return PolyhedralCone::from_inequalities(g, c.dim());
}

PolyhedralCone normal_cone(const Polyhedron& c, const Vector& x) {
  if (!c.contains(x)) throw PreconditionError("normal_cone: point is not in the set");
  std::vector<Vector> gens;
  for (auto i : c.active_set(x)) gens.emplace_back(c.a().row(i).transpose());
  return PolyhedralCone::from_generators(c.dim(), gens);
}

std::vector<Vector> smallest_exposed_face(const Polyhedron& c, const Vector& x) {
  if (!c.contains(x)) throw PreconditionError("smallest_exposed_face: point is not in the set");
  if (!c.is_bounded_polytope()) {
    throw PreconditionError("smallest_exposed_face: needs a polytope with known vertices");
  }
  Vector y = Vector::Zero(c.dim());
  for (auto i : c.active_set(x)) y += c.a().row(i).transpose().normalized();
  if (y.norm() <= 1e-12) return c.vertices();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : c.vertices()) best = std::max(best, y.dot(v));
  const double tol = 1e-10 * std::max(1.0, std::abs(best));
  std::vector<Vector> face;
  for (const auto& v : c.vertices())
    if (y.dot(v) >= best - tol) face.push_back(v);
  return face;
}

std::vector<Matrix> projection_jacobians(const Polyhedron& c, const Vector& y) {
  const Eigen::Index n = c.dim();
  const Vector p = c.project(y);
  const Vector r = y - p;
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  const auto act = c.active_set(p, 1e-9);
  const auto k = static_cast<int>(act.size());
  if (k > 16) throw EnumerationUnavailable("projection_jacobians: more than 2^16 activity patterns");

  std::vector<std::uint32_t> masks(std::size_t{1} << k);
  std::iota(masks.begin(), masks.end(), 0U);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  std::vector<Matrix> out;
  for (const std::uint32_t mask : masks) {
    std::vector<Eigen::Index> in_j;
    std::vector<Eigen::Index> rest;
    for (int i = 0; i < k; ++i) ((mask >> i) & 1U ? in_j : rest).push_back(act[static_cast<std::size_t>(i)]);

    Matrix aj(static_cast<Eigen::Index>(in_j.size()), n);
    for (std::size_t i = 0; i < in_j.size(); ++i) aj.row(static_cast<Eigen::Index>(i)) = c.a().row(in_j[i]);
    const Matrix nb = null_space_basis(aj, n);

    // A face whose relative interior has exactly J active must exist near p:
    // some d in null(A_J) with a_i d < 0 for the remaining active rows (Gordan).
    if (!rest.empty()) {
      if (nb.cols() == 0) continue;
      Matrix reduced(nb.cols(), static_cast<Eigen::Index>(rest.size()));
      for (std::size_t i = 0; i < rest.size(); ++i)
        reduced.col(static_cast<Eigen::Index>(i)) = nb.transpose() * c.a().row(rest[i]).transpose();
      if (min_norm_point(reduced).point.norm() <= 1e-9) continue;
    }
    // y - p must lie in the normal cone of that face, cone{a_j : j in J}.
    if (in_j.empty()) {
      if (r.norm() > 1e-9 * scale) continue;
    } else if (nnls(Matrix(aj.transpose()), r).residual > 1e-9 * scale) {
      continue;
    }
    Matrix d = nb * nb.transpose();
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Matrix& m) { return (m - d).norm() <= 1e-9; });
    if (!dup) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace ssn
