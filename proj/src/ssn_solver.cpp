#include "ssn/ssn_solver.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "ssn/errors.hpp"

namespace ssn {

namespace {

struct NewtonModel {
  std::function<Vector(const Vector&)> eval;
  // Builds M for the current point from a chosen Jacobian D.
  std::function<Matrix(const Vector&, const SymMatrix&)> matrix;
  // Point at which prox is differentiated.
  std::function<Vector(const Vector&)> prox_arg;
  std::function<Vector(const Vector&, const Vector&)> fallback_step;
};

SolveTrace run_newton(const CompositeProblem& p, const Vector& u0, const SolverOptions& opts,
                      const NewtonModel& model) {
  opts.validate();
  require_same_dim(u0.size(), p.dim(), "solve");
  std::mt19937_64 rng(opts.seed);

  SolveTrace trace;
  Vector u = u0;
  Vector f = model.eval(u);
  double r = f.norm();
  trace.iterates.push_back(u);
  trace.residual_norms.push_back(r);

  for (int k = 0; k < opts.max_iter && r > opts.tol; ++k) {
    const auto bd = bd_prox_set(p.phi(), p.tau(), model.prox_arg(u));
    std::size_t pick = 0;
    if (opts.jacobian_pick == JacobianPick::random_seeded && bd.elements.size() > 1) {
      pick = std::uniform_int_distribution<std::size_t>(0, bd.elements.size() - 1)(rng);
    }
    const Matrix m = model.matrix(u, bd.elements[pick]);
    const Eigen::PartialPivLU<Matrix> lu(m);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    const bool singular = !(min_pivot > 1e-12 * m.norm());

    bool accepted = false;
    if (!singular) {
      const Vector dir = -lu.solve(f);
      double step = 1.0;
      while (step >= opts.min_step) {
        const Vector trial = u + step * dir;
        const Vector ft = model.eval(trial);
        const double rt = ft.norm();
        if (rt <= (1.0 - 1e-4 * step) * r) {
          trace.step_types.push_back(step == 1.0 ? StepType::newton : StepType::damped);
          u = trial;
          f = ft;
          r = rt;
          accepted = true;
          break;
        }
        step *= opts.damping;
      }
    }
    if (!accepted) {
      if (!opts.fallback) {
        if (singular) throw NewtonBreakdown("newton_breakdown: singular generalized Jacobian", m);
        break;  // no acceptable damped step and no safeguard
      }
      u = model.fallback_step(u, f);
      f = model.eval(u);
      r = f.norm();
      trace.step_types.push_back(StepType::fallback);
    }
    trace.iterates.push_back(u);
    trace.residual_norms.push_back(r);
  }
  trace.converged = r <= opts.tol;
  return trace;
}

}  // namespace

std::string step_type_name(StepType t) {
  switch (t) {
    case StepType::newton: return "newton";
    case StepType::damped: return "damped";
    case StepType::fallback: return "fallback";
  }
  return "?";
}

void SolverOptions::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw PreconditionError("SolverOptions: damping must lie in (0,1)");
  if (!(tol > 0.0)) throw PreconditionError("SolverOptions: tol must be positive");
  if (max_iter < 0) throw PreconditionError("SolverOptions: max_iter must be nonnegative");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw PreconditionError("SolverOptions: min_step must lie in (0,1]");
}

SolveTrace solve_normal_map(const CompositeProblem& p, const Vector& z0, const SolverOptions& opts) {
  NewtonModel model;
  model.eval = [&p](const Vector& z) { return normal_map(p, z); };
  model.prox_arg = [](const Vector& z) { return z; };
  model.matrix = [&p](const Vector& z, const SymMatrix& d) {
    return m_nor_element(p, prox_eval(p.phi(), p.tau(), z), d);
  };
  // Proximal-gradient step from x = prox(z), lifted so that prox(z+) = x+.
  model.fallback_step = [&p](const Vector& z, const Vector& f) { return Vector(z - p.tau() * f); };
  return run_newton(p, z0, opts, model);
}

SolveTrace solve_natural_residual(const CompositeProblem& p, const Vector& x0, const SolverOptions& opts) {
  NewtonModel model;
  model.eval = [&p](const Vector& x) { return natural_residual(p, x); };
  model.prox_arg = [&p](const Vector& x) { return Vector(x - p.tau() * p.gradient(x)); };
  model.matrix = [&p](const Vector& x, const SymMatrix& d) { return m_nat_element(p, x, d); };
  model.fallback_step = [](const Vector& x, const Vector& f) { return Vector(x - f); };
  return run_newton(p, x0, opts, model);
}

RateProfile rate_profile(const SolveTrace& trace, const Vector& ref) {
  if (trace.iterates.size() < 2) throw PreconditionError("rate_profile: need at least two iterates");
  const double hit = 1e-14 * (1.0 + ref.norm());
  RateProfile out;
  for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
    const double ek = (trace.iterates[k] - ref).norm();
    if (ek <= hit) break;
    const double ek1 = (trace.iterates[k + 1] - ref).norm();
    if (ek1 <= hit) {
      out.quotients.push_back(0.0);
      break;
    }
    out.quotients.push_back(ek1 / ek);
  }
  const auto& q = out.quotients;
  if (!q.empty() && q.back() <= 0.1) {
    bool decreasing = true;
    const std::size_t start = q.size() >= 3 ? q.size() - 3 : 0;
    for (std::size_t i = start + 1; i < q.size(); ++i) decreasing = decreasing && q[i] < q[i - 1];
    out.superlinear = decreasing;
  }
  return out;
}

}  // namespace ssn
