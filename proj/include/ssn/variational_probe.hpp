#pragma once

#include <cstdint>
#include <vector>

#include "ssn/polyhedral.hpp"
#include "ssn/prox_catalog.hpp"
#include "ssn/residual_maps.hpp"

namespace ssn {

struct QuotientSample {
  double t = 0.0;
  Vector h_used;
  double value = 0.0;  // may be +infinity
};

/// [phi(x + t h) - phi(x) - t <v, h>] / (t^2 / 2).
QuotientSample second_diff_quotient(const ProxSpec& phi, const Vector& x, const Vector& v, const Vector& h,
                                    double t);

/// 15 points, 1e-1 down to 1e-8, log-spaced.
std::vector<double> default_t_grid();

struct D2Estimate {
  double estimate = 0.0;  // +infinity when diverging
  bool diverging = false;
  std::vector<double> values;  // per grid point, min over perturbed directions
};

/// Finite proxy for the second subderivative: per t the minimum over h and
/// `perturbations` random h' with ||h' - h|| <= r, r log-uniform over six
/// decades below 0.1 t, then the minimum over
/// the last five grid points. Diverging when the last value exceeds 1e6 and
/// the last five values increase strictly.
D2Estimate estimate_d2(const ProxSpec& phi, const Vector& x, const Vector& v, const Vector& h,
                       const std::vector<double>& t_grid = default_t_grid(), int perturbations = 20,
                       std::uint64_t seed = 0);

enum class ExampleSet { arc_segment, sharp_cusp };

/// Distance of `y` to the example set.
double example_set_distance(ExampleSet set, const Vector& y);

/// Probe of dist(0, outer second-order tangent set at lambda along p): per t
/// the smallest ||w|| with dist(lambda + t p + t^2/2 w, C) <= 1e-3 t^2, which
/// is 2 max(0, dist(lambda + t p, C) - 1e-3 t^2) / t^2. Returns +infinity when
/// the values blow up as t decreases.
double second_tangent_distance(ExampleSet set, const Vector& lambda, const Vector& p,
                               const std::vector<double>& t_grid = {});

/// Largest entry of |H_fd - H| for a central-difference Hessian of the
/// problem's smooth part at x.
double hessian_check(const CompositeProblem& p, const Vector& x, double step = 1e-5);

}  // namespace ssn
