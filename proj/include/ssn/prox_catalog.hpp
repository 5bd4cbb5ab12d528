#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssn/matrix_core.hpp"
#include "ssn/polyhedral.hpp"

namespace ssn {

enum class ProxKind {
  zero,
  l1,
  indicator_orthant,
  indicator_abs_cone,  // K = {x : x1 >= |x2|}, n = 2
  group_l2,
  polyhedral_support,   // sigma_C for C = conv(vertices) + cone(rays)
  support_arc_segment,  // n = 3
  support_sharp_cusp,   // C = {x2 >= (2/3)|x1|^{3/2}}, n = 2
};

std::string kind_name(ProxKind kind);
/// Throws UnsupportedKind for unknown names.
ProxKind kind_from_name(const std::string& name);

/// A catalog member phi. Build through the named constructors, which
/// validate parameters.
struct ProxSpec {
  ProxKind kind = ProxKind::zero;
  Eigen::Index n = 0;
  double weight = 1.0;                             // l1, group_l2
  std::vector<std::vector<Eigen::Index>> blocks;   // group_l2 partition
  std::vector<Vector> vertices;                    // polyhedral_support
  std::vector<Vector> rays;                        // polyhedral_support
  double rho = 0.0;
  std::shared_ptr<const Polyhedron> set;           // polyhedral_support, abs cone

  static ProxSpec zero(Eigen::Index n);
  static ProxSpec l1(Eigen::Index n, double weight);
  static ProxSpec orthant(Eigen::Index n);
  static ProxSpec abs_cone();
  static ProxSpec group_l2(double weight, std::vector<std::vector<Eigen::Index>> blocks);
  static ProxSpec polyhedral_support(std::vector<Vector> vertices, std::vector<Vector> rays = {});
  static ProxSpec arc_segment();
  static ProxSpec sharp_cusp();
};

/// phi(x); +infinity outside the domain.
double phi_value(const ProxSpec& spec, const Vector& x);
/// phi(x + d) - phi(x), evaluated without cancellation where phi is smooth
/// along the segment. Requires phi(x) finite.
double phi_increment(const ProxSpec& spec, const Vector& x, const Vector& d);

Vector prox_eval(const ProxSpec& spec, double tau, const Vector& z);

struct BdProxSet {
  std::vector<SymMatrix> elements;
  bool exhaustive = true;
};

/// Bouligand Jacobians of prox_{tau phi} at z. Throws EnumerationUnavailable
/// where no enumeration is implemented.
BdProxSet bd_prox_set(const ProxSpec& spec, double tau, const Vector& z);

/// x = prox_phi(x + v), i.e. v in the subdifferential of phi at x.
bool subgradient_contains(const ProxSpec& spec, const Vector& x, const Vector& v, double tol = 1e-9);

struct SecondOrderDescriptor {
  SymMatrix q;
  PolyhedralCone s_cone;
  Subspace aff_s;
  std::optional<Vector> lambda_bar;
};

/// Q, S, aff(S) of the generalized conic quadratic second subderivative at
/// (x_bar, v_bar). Throws PreconditionError if v_bar is not a subgradient.
SecondOrderDescriptor second_order_descriptor(const ProxSpec& spec, const Vector& x_bar,
                                              const Vector& v_bar);

struct SequencePoint {
  Vector x;
  Vector v;
  SymMatrix hessian;
};

/// Reference sequence of the arc/cusp examples: point, gradient of phi and
/// Hessian of phi at index k >= 2.
SequencePoint example_sequence(const ProxSpec& spec, int k);

/// Gradient and Hessian of phi where it is C^2 (arc region x1 > 0 with the
/// disk piece strictly active; cusp with x2 < 0). Throws
/// EnumerationUnavailable elsewhere.
Vector smooth_gradient(const ProxSpec& spec, const Vector& x);
SymMatrix smooth_hessian(const ProxSpec& spec, const Vector& x);
bool in_smooth_region(const ProxSpec& spec, const Vector& x);

Vector project_arc_set(const Vector& y);
Vector project_cusp_set(const Vector& y);
double arc_support(const Vector& x);
double cusp_support(const Vector& x);

}  // namespace ssn
