#pragma once

#include <optional>
#include <vector>

#include "ssn/matrix_core.hpp"

namespace ssn {

/// Finitely generated cone {sum a_i g_i + l : a_i >= 0, l in lineality}.
/// Generators are kept orthogonal to the lineality space.
class PolyhedralCone {
 public:
  PolyhedralCone() = default;

  static PolyhedralCone zero(Eigen::Index n);
  static PolyhedralCone whole(Eigen::Index n);
  /// Normalizes: detects lineality among the generators, projects the rest
  /// onto its complement, drops zeros and duplicates.
  static PolyhedralCone from_generators(Eigen::Index n, const std::vector<Vector>& generators,
                                        const Subspace* lineality = nullptr);
  /// {d : G d <= 0} for the rows of G (extreme-ray enumeration, n <= 6).
  static PolyhedralCone from_inequalities(const Matrix& g, Eigen::Index n);

  Eigen::Index ambient_dim() const { return n_; }
  const std::vector<Vector>& generators() const { return generators_; }
  const Subspace& lineality() const { return lineality_; }

  bool contains(const Vector& v, double tol = 1e-10) const;
  /// Linear span of the cone (equals its affine hull since 0 is in the cone).
  Subspace span() const;
  /// Generators plus +/- lineality basis vectors as columns.
  Matrix generator_matrix() const;
  /// Polar cone {y : <y, d> <= 0 for all d in cone}.
  PolyhedralCone polar() const;

 private:
  Eigen::Index n_ = 0;
  std::vector<Vector> generators_;
  Subspace lineality_;
};

/// Polyhedron {x : A x <= b} with a known feasible point. Bounded polytopes
/// built from vertices also keep their vertex list.
class Polyhedron {
 public:
  Polyhedron() = default;

  static Polyhedron from_inequalities(Matrix a, Vector b, Vector feasible_point);
  /// conv(vertices) + cone(rays), converted to inequalities by facet
  /// enumeration over generator subsets (n <= 6).
  static Polyhedron from_generators(const std::vector<Vector>& vertices,
                                    const std::vector<Vector>& rays = {});
  static Polyhedron box(const Vector& lower, const Vector& upper);

  Eigen::Index dim() const { return a_.cols(); }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& feasible_point() const { return feasible_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const std::vector<Vector>& rays() const { return rays_; }
  bool is_bounded_polytope() const { return !vertices_.empty() && rays_.empty(); }

  bool contains(const Vector& x, double tol = 1e-10) const;
  std::vector<Eigen::Index> active_set(const Vector& x, double tol = 1e-10) const;
  Vector project(const Vector& y) const;
  /// Support function max_{c in C} <c, x>; +infinity when unbounded.
  double support(const Vector& x) const;

 private:
  Matrix a_;
  Vector b_;
  Vector feasible_;
  std::vector<Vector> vertices_;
  std::vector<Vector> rays_;
};

PolyhedralCone tangent_cone(const Polyhedron& c, const Vector& x);
PolyhedralCone normal_cone(const Polyhedron& c, const Vector& x);

/// Smallest exposed face of a polytope containing x, as the subset of its
/// vertices maximizing <y, .> for y in the relative interior of N_C(x).
std::vector<Vector> smallest_exposed_face(const Polyhedron& c, const Vector& x);

/// Bouligand Jacobians of the projection onto C at y: projectors onto
/// lin(F) for the faces F containing Pi_C(y) whose normal cone contains
/// y - Pi_C(y). Ordered by active-subset bitmask (fewest active first).
std::vector<Matrix> projection_jacobians(const Polyhedron& c, const Vector& y);

}  // namespace ssn
