#include "ssn/residual_maps.hpp"

#include <cmath>

#include "ssn/errors.hpp"

namespace ssn {

CompositeProblem CompositeProblem::quadratic(SymMatrix a, Vector b, ProxSpec phi, double tau) {
  require_same_dim(a.dim(), b.size(), "CompositeProblem::quadratic");
  require_same_dim(a.dim(), phi.n, "CompositeProblem::quadratic");
  CompositeProblem p;
  p.n_ = a.dim();
  p.tau_ = tau;
  p.phi_ = std::move(phi);
  p.quad_a_ = std::move(a);
  p.quad_b_ = std::move(b);
  p.check_tau();
  return p;
}

CompositeProblem CompositeProblem::with_callbacks(Eigen::Index n, SmoothCallbacks f, ProxSpec phi,
                                                  double tau) {
  require_same_dim(n, phi.n, "CompositeProblem::with_callbacks");
  if (!f.value || !f.gradient || !f.hessian) {
    throw PreconditionError("CompositeProblem: value, gradient and hessian callbacks are required");
  }
  CompositeProblem p;
  p.n_ = n;
  p.tau_ = tau;
  p.phi_ = std::move(phi);
  p.callbacks_ = std::move(f);
  p.check_tau();
  return p;
}

void CompositeProblem::check_tau() const {
  if (!(tau_ > 0.0)) throw PreconditionError("CompositeProblem: tau must be positive");
  if (tau_ * phi_.rho >= 1.0) throw PreconditionError("CompositeProblem: tau * rho must be below 1");
}

const SymMatrix& CompositeProblem::quadratic_a() const {
  if (!quad_a_) throw PreconditionError("CompositeProblem: f is not quadratic");
  return *quad_a_;
}

const Vector& CompositeProblem::quadratic_b() const {
  if (!quad_a_) throw PreconditionError("CompositeProblem: f is not quadratic");
  return quad_b_;
}

double CompositeProblem::f_value(const Vector& x) const {
  require_same_dim(x.size(), n_, "f_value");
  if (quad_a_) return 0.5 * x.dot(quad_a_->mat() * x) - quad_b_.dot(x);
  return callbacks_.value(x);
}

Vector CompositeProblem::gradient(const Vector& x) const {
  require_same_dim(x.size(), n_, "gradient");
  if (quad_a_) return quad_a_->mat() * x - quad_b_;
  return callbacks_.gradient(x);
}

SymMatrix CompositeProblem::hessian(const Vector& x) const {
  require_same_dim(x.size(), n_, "hessian");
  if (quad_a_) return *quad_a_;
  return callbacks_.hessian(x);
}

double CompositeProblem::objective(const Vector& x) const { return f_value(x) + phi_value(phi_, x); }

StationaryTriple StationaryTriple::from_x(const CompositeProblem& p, const Vector& x_bar, double tol) {
  StationaryTriple st;
  st.x_bar = x_bar;
  st.v_bar = -p.gradient(x_bar);
  st.z_bar = x_bar + p.tau() * st.v_bar;
  const double gap = (x_bar - prox_eval(p.phi(), p.tau(), st.z_bar)).norm();
  if (gap > tol) {
    throw PreconditionError("StationaryTriple: point is not stationary (prox gap " + std::to_string(gap) + ")");
  }
  return st;
}

StationaryTriple StationaryTriple::from_z(const CompositeProblem& p, const Vector& z, double tol) {
  return from_x(p, prox_eval(p.phi(), p.tau(), z), tol);
}

Vector natural_residual(const CompositeProblem& p, const Vector& x) {
  return x - prox_eval(p.phi(), p.tau(), x - p.tau() * p.gradient(x));
}

Vector normal_map(const CompositeProblem& p, const Vector& z) {
  const Vector x = prox_eval(p.phi(), p.tau(), z);
  return p.gradient(x) + (z - x) / p.tau();
}

Matrix m_nor_element(const CompositeProblem& p, const Vector& x, const SymMatrix& d) {
  const Eigen::Index n = p.dim();
  return p.hessian(x).mat() * d.mat() + (Matrix::Identity(n, n) - d.mat()) / p.tau();
}

Matrix m_nat_element(const CompositeProblem& p, const Vector& x, const SymMatrix& d) {
  const Eigen::Index n = p.dim();
  return Matrix::Identity(n, n) - d.mat() * (Matrix::Identity(n, n) - p.tau() * p.hessian(x).mat());
}

std::vector<Matrix> m_nor_set(const CompositeProblem& p, const Vector& z) {
  const Vector x = prox_eval(p.phi(), p.tau(), z);
  std::vector<Matrix> out;
  for (const auto& d : bd_prox_set(p.phi(), p.tau(), z).elements) out.push_back(m_nor_element(p, x, d));
  return out;
}

std::vector<Matrix> m_nat_set(const CompositeProblem& p, const Vector& x) {
  const Vector z = x - p.tau() * p.gradient(x);
  std::vector<Matrix> out;
  for (const auto& d : bd_prox_set(p.phi(), p.tau(), z).elements) out.push_back(m_nat_element(p, x, d));
  return out;
}

}  // namespace ssn
