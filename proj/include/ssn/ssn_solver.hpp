#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssn/residual_maps.hpp"

namespace ssn {

enum class JacobianPick { first, random_seeded };
enum class StepType { newton, damped, fallback };

std::string step_type_name(StepType t);

struct SolverOptions {
  int max_iter = 100;
  double tol = 1e-11;
  double damping = 0.5;
  double min_step = 1e-8;
  JacobianPick jacobian_pick = JacobianPick::first;
  std::uint64_t seed = 0;  // used by JacobianPick::random_seeded
  bool fallback = true;

  void validate() const;
};

/// iterates[k] and residual_norms[k] describe iterate k; step_types[k] is the
/// step that produced iterate k + 1.
struct SolveTrace {
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;
  std::vector<StepType> step_types;
  bool converged = false;
};

/// Newton on the normal map: z+ = z - M^{-1} F_nor(z), M in M_nor(z).
SolveTrace solve_normal_map(const CompositeProblem& p, const Vector& z0, const SolverOptions& opts = {});
/// Newton on the natural residual with M in M_nat(x).
SolveTrace solve_natural_residual(const CompositeProblem& p, const Vector& x0,
                                  const SolverOptions& opts = {});

struct RateProfile {
  std::vector<double> quotients;
  bool superlinear = false;
};

/// q_k = ||u_{k+1} - ref|| / ||u_k - ref||, truncated once an iterate equals
/// ref (within 1e-14 relative).
RateProfile rate_profile(const SolveTrace& trace, const Vector& ref);

}  // namespace ssn
