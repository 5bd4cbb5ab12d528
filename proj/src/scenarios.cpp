#include "ssn/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "ssn/certification.hpp"
#include "ssn/serialization.hpp"
#include "ssn/ssn_solver.hpp"
#include "ssn/variational_probe.hpp"

namespace ssn {

namespace {

using nlohmann::json;

class Checker {
 public:
  void check(const std::string& name, bool ok, json value = nullptr) {
    checks_.push_back({{"name", name}, {"passed", ok}, {"value", std::move(value)}});
    if (!ok) failures_.push_back(name);
  }

  ScenarioResult finish(const std::string& id, json data) {
    ScenarioResult r;
    r.failures = failures_;
    r.passed = failures_.empty();
    r.report = {{"example", id}, {"passed", r.passed}, {"checks", checks_}, {"data", std::move(data)}};
    return r;
  }

 private:
  json checks_ = json::array();
  std::vector<std::string> failures_;
};

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

bool same_matrices(const std::vector<Matrix>& got, const std::vector<Matrix>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i] != want[i]) return false;
  return true;
}

ScenarioResult run_4_2(std::uint64_t seed) {
  Checker ck;
  const CompositeProblem p = example_4_2_problem();
  const Vector z0 = Vector::Zero(2);

  std::vector<Matrix> ds;
  for (const auto& d : bd_prox_set(p.phi(), p.tau(), z0).elements) ds.push_back(d.mat());
  ck.check("bd_prox_set is {I, diag(1,0), diag(0,1), 0}",
           same_matrices(ds, {Matrix::Identity(2, 2), mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), Matrix::Zero(2, 2)}));

  const auto ms = m_nor_set(p, z0);
  ck.check("m_nor_set is {A, [[2,0],[2,1]], [[1,2],[0,1]], I}",
           same_matrices(ms, {mat2(2, 2, 2, 1), mat2(2, 0, 2, 1), mat2(1, 2, 0, 1), Matrix::Identity(2, 2)}));
  const auto st = StationaryTriple::from_x(p, Vector::Zero(2));
  const auto nat = m_nat_set(p, st.x_bar);
  bool transpose_ok = nat.size() == ms.size();
  for (std::size_t i = 0; transpose_ok && i < ms.size(); ++i)
    transpose_ok = (nat[i] - p.tau() * ms[i].transpose()).norm() <= 1e-12;
  ck.check("m_nat_set equals tau * transposed m_nor_set", transpose_ok);

  const auto vi = bd_regularity(ms);
  ck.check("all four matrices invertible", vi.status == VerdictStatus::certified_true);
  const auto desc = second_order_descriptor(p.phi(), st.x_bar, st.v_bar);
  const auto ssosc = check_ssosc(desc, p.hessian(st.x_bar));
  const double expected = (3.0 - std::sqrt(17.0)) / 2.0;
  ck.check("strong second-order sufficient condition fails",
           ssosc.status == VerdictStatus::certified_false && std::abs(*ssosc.sigma - expected) <= 1e-12,
           *ssosc.sigma);

  CrossCheckOptions opts;
  opts.seed = seed;
  const auto rep = cross_check(p, st, opts);
  bool noted = false;
  for (const auto& n : rep.consensus.notes)
    noted = noted || n.find("second-order necessary") != std::string::npos;
  ck.check("consensus consistent with expected divergence", rep.consensus.consistent && noted);

  Vector start(2);
  start << 1e-3, 2e-3;
  const auto trace = solve_normal_map(p, start);
  ck.check("Newton from near 0 converges to 0", trace.converged && trace.iterates.back().norm() <= 1e-12,
           real_json(trace.iterates.back().norm()));

  json data;
  data["m_nor"] = json::array();
  for (const auto& m : ms) data["m_nor"].push_back(matrix_json(m));
  data["certification"] = to_json(rep);
  return ck.finish("exam-4-2", data);
}

ScenarioResult run_cone(std::uint64_t seed) {
  Checker ck;
  const CompositeProblem p = cone_example_problem();
  double worst = 0.0;
  double worst_inv = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      Vector x(2);
      x << -1.0 + 2.0 * i / 9.0, -1.0 + 2.0 * j / 9.0;
      Vector want(2);
      want << x(0) - 0.75 * std::abs(x(1)), 0.25 * x(1);
      worst = std::max(worst, (natural_residual(p, x) - want).cwiseAbs().maxCoeff());
      Vector inv(2);
      inv << x(0) + 3.0 * std::abs(x(1)), 4.0 * x(1);
      worst_inv = std::max(worst_inv, (natural_residual(p, inv) - x).cwiseAbs().maxCoeff());
    }
  }
  ck.check("F_nat matches (x1 - 3/4|x2|, x2/4) on the grid", worst <= 1e-14, worst);
  ck.check("(y1 + 3|y2|, 4 y2) inverts F_nat on the grid", worst_inv <= 1e-13, worst_inv);

  SmrOptions so;
  so.radius = 0.5;
  so.pairs = 10000;
  so.seed = seed;
  const auto smr = smr_probe(ResidualMapKind::nat, p, Vector::Zero(2), so);
  ck.check("sampled lower Lipschitz bound in [0.19, 0.26]",
           smr.status == VerdictStatus::probe_true && *smr.sigma >= 0.19 && *smr.sigma <= 0.26, *smr.sigma);

  const auto st = StationaryTriple::from_x(p, Vector::Zero(2));
  const auto ssosc = check_ssosc(second_order_descriptor(p.phi(), st.x_bar, st.v_bar), p.hessian(st.x_bar));
  ck.check("strong second-order sufficient condition fails", ssosc.status == VerdictStatus::certified_false,
           *ssosc.sigma);

  Vector x0(2);
  x0 << 0.4, 0.1;
  const auto trace = solve_natural_residual(p, x0);
  ck.check("Newton on F_nat from (0.4, 0.1) reaches 0",
           trace.converged && trace.iterates.back().norm() <= 1e-10, real_json(trace.iterates.back().norm()));

  json data;
  data["smr"] = to_json(smr);
  data["solve"] = to_json(trace, Vector(Vector::Zero(2)));
  return ck.finish("exam-4-3-cone", data);
}

ScenarioResult run_2_11() {
  Checker ck;
  const ProxSpec phi = ProxSpec::arc_segment();
  const double tau = 1.0;
  Matrix limit = Matrix::Zero(3, 3);
  limit(1, 1) = limit(2, 2) = 1.0;
  json table = json::array();
  bool subgrad = true;
  for (int k : {10, 100, 1000, 10000}) {
    const auto sp = example_sequence(phi, k);
    const Matrix inv = (Matrix::Identity(3, 3) + tau * sp.hessian.mat()).inverse();
    const double err = (inv - limit).norm();
    subgrad = subgrad && subgradient_contains(phi, sp.x, sp.v, 1e-9);
    table.push_back({{"k", k}, {"x", vector_json(sp.x)}, {"lambda", vector_json(sp.v)},
                     {"hessian", matrix_json(sp.hessian.mat())}, {"prox_jacobian", matrix_json(inv)},
                     {"distance_to_limit", err}});
    if (k == 1000) ck.check("prox Jacobian within 1e-2 of diag(0,1,1) at k = 1000", err <= 1e-2, err);
  }
  ck.check("lambda_k is a subgradient at x_k", subgrad);

  const auto desc = second_order_descriptor(phi, Vector::Zero(3), Vector::Zero(3));
  BdProxSet limit_set;
  limit_set.elements = {SymMatrix(limit)};
  limit_set.exhaustive = false;
  const auto p1 = check_P1(limit_set, desc, tau);
  ck.check("structural condition P1 fails for the limit Jacobian", !p1.holds() && desc.aff_s.dim() == 2);

  Vector lam(3);
  lam << 1.0, 1.0, 0.0;
  Vector dir(3);
  dir << 0.0, 1.0, 0.0;
  const double curv = second_tangent_distance(ExampleSet::arc_segment, lam, dir);
  ck.check("second-order tangent distance on the arc is about 1", std::abs(curv - 1.0) <= 1e-2, curv);
  return ck.finish("exam-2-11", {{"sequence", table}});
}

ScenarioResult run_2_12(std::uint64_t seed) {
  Checker ck;
  const ProxSpec phi = ProxSpec::sharp_cusp();
  const double tau = 1.0;
  json table = json::array();
  double worst = 0.0;
  for (int k : {2, 10, 100, 1000}) {
    const auto sp = example_sequence(phi, k);
    const double kk = k;
    const Matrix closed = 2.0 * mat2(1 / kk, 1 / (kk * kk * kk), 1 / (kk * kk * kk), 1 / (kk * kk * kk * kk * kk));
    worst = std::max(worst, (sp.hessian.mat() - closed).cwiseAbs().maxCoeff());
    const Matrix inv = (Matrix::Identity(2, 2) + tau * sp.hessian.mat()).inverse();
    const double err = (inv - Matrix::Identity(2, 2)).norm();
    table.push_back({{"k", k}, {"x", vector_json(sp.x)}, {"lambda", vector_json(sp.v)},
                     {"hessian", matrix_json(sp.hessian.mat())}, {"prox_jacobian", matrix_json(inv)},
                     {"distance_to_identity", err}});
    if (k == 1000) ck.check("prox Jacobian within 1e-2 of I at k = 1000", err <= 1e-2, err);
  }
  ck.check("Hessian table matches 2[[1/k, 1/k^3],[1/k^3, 1/k^5]]", worst <= 1e-14, worst);

  Vector h(2);
  h << 1.0, 0.0;
  const auto d2 = estimate_d2(phi, Vector::Zero(2), Vector::Zero(2), h);
  ck.check("difference quotients diverge along (1,0)", d2.diverging);
  const double otp = second_tangent_distance(ExampleSet::sharp_cusp, Vector::Zero(2), h);
  ck.check("second-order tangent set along (1,0) is empty", std::isinf(otp), real_json(otp));

  const CompositeProblem p = cusp_problem(-0.1);
  const auto st = StationaryTriple::from_x(p, Vector::Zero(2));
  CrossCheckOptions opts;
  opts.seed = seed;
  const auto rep = cross_check(p, st, opts);
  bool noted = false;
  for (const auto& n : rep.consensus.notes) noted = noted || n.find("(P.1) fails") != std::string::npos;
  ck.check("(i) holds while (viii) fails, flagged as expected divergence",
           rep.get(ConditionId::i).holds() && !rep.get(ConditionId::viii_cd_gj).holds() && noted &&
               rep.consensus.consistent);
  return ck.finish("exam-2-12", {{"sequence", table}, {"certification", to_json(rep)}});
}

}  // namespace

CompositeProblem example_4_2_problem() {
  return CompositeProblem::quadratic(SymMatrix(mat2(2, 2, 2, 1)), Vector::Zero(2), ProxSpec::orthant(2), 1.0);
}

CompositeProblem cone_example_problem() {
  return CompositeProblem::quadratic(SymMatrix(mat2(2, 0, 0, -1)), Vector::Zero(2), ProxSpec::abs_cone(), 0.5);
}

CompositeProblem cusp_problem(double c) {
  return CompositeProblem::quadratic(SymMatrix(mat2(c, 0, 0, 1)), Vector::Zero(2), ProxSpec::sharp_cusp(), 1.0);
}

std::vector<std::string> scenario_ids() { return {"exam-2-11", "exam-2-12", "exam-4-2", "exam-4-3-cone"}; }

ScenarioResult reproduce(const std::string& id, std::uint64_t seed) {
  if (id == "exam-4-2") return run_4_2(seed);
  if (id == "exam-4-3-cone") return run_cone(seed);
  if (id == "exam-2-11") return run_2_11();
  if (id == "exam-2-12") return run_2_12(seed);
  throw std::invalid_argument("unknown example id '" + id + "'");
}

}  // namespace ssn
