#include "ssn/variational_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ssn/errors.hpp"

namespace ssn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector random_in_ball(std::mt19937_64& rng, Eigen::Index n, double radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = gauss(rng);
  const double norm = g.norm();
  if (norm == 0.0) return Vector::Zero(n);
  return g * (radius * std::pow(unif(rng), 1.0 / static_cast<double>(n)) / norm);
}

std::vector<double> logspace(double from, double to, int count) {
  std::vector<double> out;
  const double a = std::log10(from);
  const double b = std::log10(to);
  for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  return out;
}

}  // namespace

QuotientSample second_diff_quotient(const ProxSpec& phi, const Vector& x, const Vector& v, const Vector& h,
                                    double t) {
  if (!(t > 0.0)) throw PreconditionError("second_diff_quotient: t must be positive");
  require_same_dim(v.size(), x.size(), "second_diff_quotient");
  require_same_dim(h.size(), x.size(), "second_diff_quotient");
  if (!std::isfinite(phi_value(phi, x))) throw PreconditionError("second_diff_quotient: phi(x) is infinite");
  QuotientSample s{t, h, kInf};
  const double inc = phi_increment(phi, x, t * h);
  if (std::isfinite(inc)) s.value = (inc - t * v.dot(h)) / (0.5 * t * t);
  return s;
}

std::vector<double> default_t_grid() { return logspace(1e-1, 1e-8, 15); }

D2Estimate estimate_d2(const ProxSpec& phi, const Vector& x, const Vector& v, const Vector& h,
                       const std::vector<double>& t_grid, int perturbations, std::uint64_t seed) {
  if (t_grid.size() < 5) throw PreconditionError("estimate_d2: need at least five grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] < t_grid[i - 1]) || !(t_grid[i] > 0.0)) {
      throw PreconditionError("estimate_d2: t grid must be positive and strictly decreasing");
    }
  }
  if (t_grid.back() > 1e-6) throw PreconditionError("estimate_d2: t grid must reach 1e-6");

  // One set of offsets, scaled by t, so the grid values stay comparable.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decades(0.0, 6.0);
  std::vector<Vector> offsets;
  for (int j = 0; j < perturbations; ++j)
    offsets.push_back(random_in_ball(rng, h.size(), 0.1 * std::pow(10.0, -decades(rng))));
  D2Estimate out;
  for (double t : t_grid) {
    double best = second_diff_quotient(phi, x, v, h, t).value;
    for (const Vector& off : offsets) {
      const Vector ht = h + t * off;
      best = std::min(best, second_diff_quotient(phi, x, v, ht, t).value);
    }
    out.values.push_back(best);
  }
  const std::size_t m = out.values.size();
  bool increasing = true;
  for (std::size_t i = m - 4; i < m; ++i) {
    const double a = out.values[i - 1];
    const double b = out.values[i];
    increasing = increasing && (b > a || (std::isinf(a) && std::isinf(b) && a > 0.0));
  }
  out.diverging = out.values.back() > 1e6 && increasing;
  if (out.diverging) {
    out.estimate = kInf;
  } else {
    out.estimate = *std::min_element(out.values.end() - 5, out.values.end());
  }
  return out;
}

double example_set_distance(ExampleSet set, const Vector& y) {
  const Vector p = set == ExampleSet::arc_segment ? project_arc_set(y) : project_cusp_set(y);
  return (y - p).norm();
}

double second_tangent_distance(ExampleSet set, const Vector& lambda, const Vector& p,
                               const std::vector<double>& t_grid_in) {
  const Eigen::Index n = set == ExampleSet::arc_segment ? 3 : 2;
  require_same_dim(lambda.size(), n, "second_tangent_distance");
  require_same_dim(p.size(), n, "second_tangent_distance");
  if (example_set_distance(set, lambda) > 1e-9) {
    throw PreconditionError("second_tangent_distance: lambda is not in the set");
  }
  if (p.norm() == 0.0) return 0.0;
  const double tt = 1e-8;
  if (example_set_distance(set, lambda + tt * p) > 1e-3 * tt * p.norm()) {
    throw PreconditionError("second_tangent_distance: p is not a tangent direction");
  }
  const std::vector<double> grid = t_grid_in.empty() ? logspace(1e-1, 1e-5, 9) : t_grid_in;
  if (grid.size() < 5) throw PreconditionError("second_tangent_distance: need at least five grid points");

  std::vector<double> w;
  for (double t : grid) {
    const double dist = example_set_distance(set, lambda + t * p);
    w.push_back(2.0 * std::max(0.0, dist - 1e-3 * t * t) / (t * t));
  }
  const std::size_t m = w.size();
  if (w.back() > 1e6) return kInf;
  bool increasing = true;
  for (std::size_t i = m - 4; i < m; ++i) increasing = increasing && w[i] > w[i - 1];
  if (increasing && w[m - 5] > 0.0) {
    const double slope = std::log(w[m - 1] / w[m - 5]) / std::log(grid[m - 1] / grid[m - 5]);
    if (slope <= -0.25) return kInf;
  }
  return w.back();
}

double hessian_check(const CompositeProblem& p, const Vector& x, double step) {
  const Eigen::Index n = p.dim();
  Matrix fd(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e(j) = step;
    fd.col(j) = (p.gradient(x + e) - p.gradient(x - e)) / (2.0 * step);
  }
  return (fd - p.hessian(x).mat()).cwiseAbs().maxCoeff();
}

}  // namespace ssn
