#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssn/prox_catalog.hpp"
#include "ssn/residual_maps.hpp"

namespace ssn {

enum class ConditionId {
  i,
  ii_growth,
  iii_smr_subdiff,
  iv_smr_nor,
  v_cd,
  vi_bd,
  vii_bd_gj,
  viii_cd_gj,
  ix_nbhd_gj,
  x_smr_nat,
  P1,
  P2,
};

enum class VerdictStatus { certified_true, certified_false, probe_true, probe_false, not_applicable };

std::string condition_name(ConditionId id);
std::string status_name(VerdictStatus s);

struct ConditionVerdict {
  ConditionId id = ConditionId::i;
  VerdictStatus status = VerdictStatus::not_applicable;
  std::optional<double> sigma;
  nlohmann::json detail = nlohmann::json::object();

  bool certified() const;
  bool probe() const;
  /// Truth value of a certified or probed verdict.
  bool holds() const;
};

/// sigma = lambda_min(hess_f + Q) on aff(S); true iff sigma > tol_pos.
ConditionVerdict check_ssosc(const SecondOrderDescriptor& desc, const SymMatrix& hess_f, double tol_pos = 1e-9);

/// Largest sigma with D H D + (1/tau) D (I - D) >= sigma D^2 on range(D), as
/// the smallest generalized eigenvalue of that pencil. +infinity for D = 0.
double jacobian_condition_sigma(const SymMatrix& d, const SymMatrix& hess, double tau);
/// Whether the constant above reaches sigma up to 1e-9 relative.
bool jacobian_condition_holds(const SymMatrix& d, const SymMatrix& hess, double tau, double sigma);

struct JacobianConditionOptions {
  int clarke_samples = 1000;
  std::uint64_t seed = 0;
  double tol_pos = 1e-9;
};

struct JacobianCondition {
  ConditionVerdict bd;      // (vii), over the enumerated Bouligand set
  ConditionVerdict clarke;  // (viii), random convex combinations (probe)
};

JacobianCondition check_jacobian_condition(const SymMatrix& hess, double tau, const BdProxSet& bd,
                                           const JacobianConditionOptions& opts = {});
JacobianCondition check_jacobian_condition(const CompositeProblem& p, const StationaryTriple& st,
                                           const JacobianConditionOptions& opts = {});

ConditionVerdict check_P1(const BdProxSet& d_set, const SecondOrderDescriptor& desc, double tau, double rho = 0.0);
ConditionVerdict check_P2(const SecondOrderDescriptor& desc, const BdProxSet& d_set, double tau);

/// Every matrix has smallest singular value >= 1e-10 times its norm (and
/// positive). A false verdict from a genuine element is certified even when
/// the set is not exhaustive.
ConditionVerdict bd_regularity(const std::vector<Matrix>& m_set, bool exhaustive = true);

enum class ResidualMapKind { nat, nor, subdiff };

struct SmrOptions {
  double radius = 1e-2;
  int pairs = 1000;
  std::uint64_t seed = 0;
};

/// Sampled lower Lipschitz bound of the residual map around `center` (x for
/// nat, z for nor and subdiff). Pair radii are log-uniform over six decades
/// below `radius`.
ConditionVerdict smr_probe(ResidualMapKind map, const CompositeProblem& p, const Vector& center,
                           const SmrOptions& opts = {});

/// Random D', B' within Frobenius distance delta of D, B (D' kept in the
/// admissible band) all satisfy D'B'D' + (1/tau) D'(I - D') >= (sigma/4) D'^2.
bool perturbation_stability(const SymMatrix& d, const SymMatrix& b, double tau, double sigma, int trials,
                            double delta, std::uint64_t seed);

/// Quadratic growth of f + phi around x_bar over sampled points of a ball.
ConditionVerdict growth_probe(const CompositeProblem& p, const StationaryTriple& st, int samples = 10000,
                              double radius = 1e-2, std::uint64_t seed = 0);

struct Consensus {
  bool consistent = true;
  std::vector<std::string> clashing;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

struct CertificationReport {
  std::vector<ConditionVerdict> verdicts;
  Consensus consensus;
  std::string problem_hash;

  const ConditionVerdict& get(ConditionId id) const;
};

struct CrossCheckOptions {
  std::uint64_t seed = 0;
  double tol_pos = 1e-9;
  int clarke_samples = 1000;
  int nbhd_points = 20;
  double nbhd_radius = 1e-3;
  int nbhd_clarke_samples = 100;
  SmrOptions smr{};
  int growth_samples = 10000;
  double growth_radius = 1e-2;
  bool run_probes = true;
};

/// The full battery at a stationary triple, with the consensus rule.
CertificationReport cross_check(const CompositeProblem& p, const StationaryTriple& st,
                                const CrossCheckOptions& opts = {});

}  // namespace ssn
