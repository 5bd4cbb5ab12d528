#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ssn/matrix_core.hpp"
#include "ssn/prox_catalog.hpp"

namespace ssn {

/// Smooth part supplied by evaluation callbacks. The Hessian must be exact;
/// the callbacks must be safe to call concurrently.
struct SmoothCallbacks {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<SymMatrix(const Vector&)> hessian;
};

/// min f(x) + phi(x) with prox step tau.
class CompositeProblem {
 public:
  /// f(x) = 1/2 <x, A x> - <b, x>.
  static CompositeProblem quadratic(SymMatrix a, Vector b, ProxSpec phi, double tau);
  static CompositeProblem with_callbacks(Eigen::Index n, SmoothCallbacks f, ProxSpec phi, double tau);

  Eigen::Index dim() const { return n_; }
  double tau() const { return tau_; }
  const ProxSpec& phi() const { return phi_; }
  bool is_quadratic() const { return quad_a_.has_value(); }
  const SymMatrix& quadratic_a() const;
  const Vector& quadratic_b() const;

  double f_value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  SymMatrix hessian(const Vector& x) const;
  /// f + phi.
  double objective(const Vector& x) const;

 private:
  CompositeProblem() = default;
  void check_tau() const;

  Eigen::Index n_ = 0;
  double tau_ = 1.0;
  ProxSpec phi_;
  std::optional<SymMatrix> quad_a_;
  Vector quad_b_;
  SmoothCallbacks callbacks_;
};

/// (x_bar, v_bar = -grad f(x_bar), z_bar = x_bar + tau v_bar).
struct StationaryTriple {
  Vector x_bar;
  Vector v_bar;
  Vector z_bar;

  /// Throws PreconditionError unless x_bar = prox(z_bar) within tol.
  static StationaryTriple from_x(const CompositeProblem& p, const Vector& x_bar, double tol = 1e-9);
  /// Uses x_bar = prox(z).
  static StationaryTriple from_z(const CompositeProblem& p, const Vector& z, double tol = 1e-9);
};

/// x - prox(x - tau grad f(x)).
Vector natural_residual(const CompositeProblem& p, const Vector& x);
/// grad f(prox z) + (z - prox z) / tau.
Vector normal_map(const CompositeProblem& p, const Vector& z);

/// grad^2 f(x) D + (I - D) / tau.
Matrix m_nor_element(const CompositeProblem& p, const Vector& x, const SymMatrix& d);
/// I - D (I - tau grad^2 f(x)).
Matrix m_nat_element(const CompositeProblem& p, const Vector& x, const SymMatrix& d);

/// One matrix per element of bd_prox_set(z), in the same order.
std::vector<Matrix> m_nor_set(const CompositeProblem& p, const Vector& z);
/// One matrix per element of bd_prox_set(x - tau grad f(x)).
std::vector<Matrix> m_nat_set(const CompositeProblem& p, const Vector& x);

}  // namespace ssn
