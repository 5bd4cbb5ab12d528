// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ssn/certification.hpp"
#include "ssn/matrix_core.hpp"
#include "ssn/prox_catalog.hpp"
#include "ssn/residual_maps.hpp"
#include "ssn/scenarios.hpp"
#include "ssn/ssn_solver.hpp"
#include "ssn/variational_probe.hpp"
#include "support/instances.hpp"

using namespace ssn;
using namespace ssn::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failed facts; detail keeps the first few.
class Facts {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok_ = false;
    if (++failed_ <= 3) msg_ << (failed_ > 1 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    if (ok_) return {true, summary};
    std::ostringstream s;
    s << msg_.str();
    if (failed_ > 3) s << " (+" << failed_ - 3 << " more)";
    return {false, s.str()};
  }

 private:
  bool ok_ = true;
  int failed_ = 0;
  std::ostringstream msg_;
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

bool same_set(std::vector<Matrix> got, std::vector<Matrix> want) {
  if (got.size() != want.size()) return false;
  for (const auto& w : want) {
    bool found = false;
    for (auto it = got.begin(); it != got.end(); ++it) {
      if (*it == w) {
        got.erase(it);
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Facts fx;
  const auto p = example_4_2_problem();
  const Vector zero = Vector::Zero(2);
  const auto bd = bd_prox_set(p.phi(), p.tau(), zero);
  std::vector<Matrix> ds;
  for (const auto& d : bd.elements) ds.push_back(d.mat());
  fx.expect(bd.exhaustive && same_set(ds, {Matrix::Identity(2, 2), mat2(1, 0, 0, 0), mat2(0, 0, 0, 1),
                                           Matrix::Zero(2, 2)}),
            "Bouligand set of the orthant projection");
  const auto ms = m_nor_set(p, zero);
  fx.expect(same_set(ms, {mat2(2, 2, 2, 1), mat2(2, 0, 2, 1), mat2(1, 2, 0, 1), Matrix::Identity(2, 2)}),
            "normal-map Jacobian set");
  fx.expect(bd_regularity(ms).holds(), "BD-regularity");
  const auto desc = second_order_descriptor(p.phi(), zero, zero);
  const auto ss = check_ssosc(desc, p.hessian(zero));
  const double want = (3.0 - std::sqrt(17.0)) / 2.0;
  fx.expect(!ss.holds() && ss.certified(), "SSOSC certified false");
  fx.expect(ss.sigma && std::abs(*ss.sigma - want) <= 1e-12, "SSOSC constant");
  return fx.done(fmt("sigma = %.15f", ss.sigma.value_or(NAN)));
}

Outcome ac2() {
  Facts fx;
  const auto p = cone_example_problem();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const Vector x = vec({-1.0 + 2.0 * i / 9.0, -1.0 + 2.0 * j / 9.0});
      const Vector want = vec({x(0) - 0.75 * std::abs(x(1)), 0.25 * x(1)});
      worst = std::max(worst, (natural_residual(p, x) - want).cwiseAbs().maxCoeff());
    }
  }
  fx.expect(worst <= 1e-14, fmt("F_nat grid error %.3g", worst));
  SmrOptions o;
  o.radius = 0.5;
  o.pairs = 10000;
  const auto smr = smr_probe(ResidualMapKind::nat, p, Vector::Zero(2), o);
  const double s = smr.sigma.value_or(NAN);
  fx.expect(s >= 0.19 && s <= 0.26, fmt("smr sigma %.4f outside [0.19, 0.26]", s));
  const auto ss = check_ssosc(second_order_descriptor(p.phi(), Vector::Zero(2), Vector::Zero(2)),
                              p.hessian(Vector::Zero(2)));
  fx.expect(!ss.holds(), "SSOSC should fail");
  return fx.done(fmt("grid error %.2g, ", worst) + fmt("smr sigma %.4f", s));
}

Outcome ac3_arc() {
  Facts fx;
  const auto phi = ProxSpec::arc_segment();
  Matrix limit = Matrix::Zero(3, 3);
  limit(1, 1) = limit(2, 2) = 1.0;
  const auto sp = example_sequence(phi, 1000);
  const double err = ((Matrix::Identity(3, 3) + sp.hessian.mat()).inverse() - limit).norm();
  fx.expect(err <= 1e-2, fmt("limit distance %.3g", err));
  const auto desc = second_order_descriptor(phi, Vector::Zero(3), Vector::Zero(3));
  Matrix e12 = Matrix::Zero(3, 2);
  e12(0, 0) = e12(1, 1) = 1.0;
  fx.expect(desc.aff_s.dim() == 2 && desc.aff_s.contains(orthonormalize(e12), 1e-12), "aff(S) = span{e1, e2}");
  BdProxSet lim;
  lim.elements = {SymMatrix(limit)};
  lim.exhaustive = false;
  fx.expect(!check_P1(lim, desc, 1.0).holds(), "P1 should fail");
  return fx.done(fmt("k = 1000 distance %.2e", err));
}

Outcome ac3_cusp() {
  Facts fx;
  const auto phi = ProxSpec::sharp_cusp();
  double worst = 0.0;
  for (int k : {2, 5, 10, 100, 1000}) {
    const double kk = k;
    const auto sp = example_sequence(phi, k);
    const Matrix closed = 2.0 * mat2(1 / kk, 1 / std::pow(kk, 3), 1 / std::pow(kk, 3), 1 / std::pow(kk, 5));
    worst = std::max(worst, (sp.hessian.mat() - closed).cwiseAbs().maxCoeff());
  }
  fx.expect(worst <= 1e-14, fmt("Hessian table error %.3g", worst));
  const auto sp = example_sequence(phi, 1000);
  const double err = ((Matrix::Identity(2, 2) + sp.hessian.mat()).inverse() - Matrix::Identity(2, 2)).norm();
  fx.expect(err <= 1e-2, fmt("Dprox distance to I %.3g", err));
  fx.expect(estimate_d2(phi, Vector::Zero(2), Vector::Zero(2), vec({1, 0})).diverging, "d2 along (1,0)");
  return fx.done(fmt("table error %.1e, ", worst) + fmt("Dprox distance %.2e", err));
}

Outcome ac4() {
  Facts fx;
  Rng rng(4001);
  double worst_rt = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const double tau = uniform(rng, 0.2, 3.0);
    const double rho = uniform(rng, 0.0, 0.9) / tau;
    const SymMatrix d = random_admissible_d(rng, n, 1.0 / (1.0 - tau * rho));
    const auto c = core_decompose(d, tau, rho);
    worst_rt = std::max(worst_rt, (c.reconstruct().mat() - d.mat()).norm());
  }
  fx.expect(worst_rt <= 1e-9, fmt("roundtrip error %.3g", worst_rt));

  double worst_order = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const SymMatrix b = random_spectrum(rng, n, -0.9, 3.0);
    const Subspace l = random_subspace(rng, n, uniform_int(rng, 0, static_cast<int>(n)));
    const Matrix pl = l.projector();
    const Matrix full = (Matrix::Identity(n, n) + b.mat()).inverse();
    const Matrix part = pl * (Matrix::Identity(n, n) + pl * b.mat() * pl).inverse() * pl;
    worst_order = std::min(worst_order, psd_margin(SymMatrix(full), SymMatrix(part)));
  }
  fx.expect(worst_order >= -1e-9, fmt("ordering margin %.3g", worst_order));

  double worst_comb = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const double tau = uniform(rng, 0.3, 2.0);
    const double rho = 0.5 / tau;
    const SymMatrix b = random_spectrum(rng, n, -rho, 2.0);
    const int count = uniform_int(rng, 1, 4);
    Matrix p = Matrix::Zero(n, n);
    Vector w(count);
    for (int i = 0; i < count; ++i) w(i) = uniform(rng, 0.05, 1.0);
    w /= w.sum();
    for (int i = 0; i < count; ++i) {
      const Subspace s = random_subspace(rng, n, uniform_int(rng, 1, static_cast<int>(n)));
      const Matrix ps = s.projector();
      const Matrix g = gaussian_matrix(rng, n, n);
      const Matrix a = ps * (b.mat() + 0.5 * g * g.transpose()) * ps;
      p += w(i) * ps * (Matrix::Identity(n, n) + tau * a).inverse() * ps;
    }
    const auto c = core_decompose(SymMatrix(p), tau, rho);
    const double margin = psd_margin(c.core, compress(b, c.range));
    worst_comb = std::min(worst_comb, margin / std::max(1.0, spectral_norm(c.core)));
  }
  fx.expect(worst_comb >= -1e-8, fmt("combination margin %.3g", worst_comb));
  return fx.done(fmt("roundtrip %.1e, ", worst_rt) + fmt("ordering %.1e, ", worst_order) +
                 fmt("combination %.1e", worst_comb));
}

Outcome ac5() {
  Facts fx;
  Rng rng(5001);
  int disagree = 0;
  int vi_missing = 0;
  int inconsistent = 0;
  int holds = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const auto kind = trial % 2 ? PlantedKind::l1 : PlantedKind::orthant;
    const double lo = uniform(rng, -1.5, 0.5);
    const auto inst = planted_instance(rng, kind, n, random_spectrum(rng, n, lo, lo + uniform(rng, 0.5, 4.0)),
                                       uniform(rng, 0.2, 1.5));
    CrossCheckOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    const auto r = cross_check(inst.problem, StationaryTriple::from_x(inst.problem, inst.x_bar), o);
    const bool i = r.get(ConditionId::i).holds();
    const bool vii = r.get(ConditionId::vii_bd_gj).holds();
    const bool viii = r.get(ConditionId::viii_cd_gj).holds();
    if (i != vii || i != viii) ++disagree;
    if (i && vii && viii) {
      ++holds;
      if (!r.get(ConditionId::vi_bd).holds()) ++vi_missing;
    }
    if (!r.consensus.consistent) ++inconsistent;
  }
  fx.expect(disagree == 0, std::to_string(disagree) + " instances with (i), (vii), (viii) disagreeing");
  fx.expect(vi_missing == 0, std::to_string(vi_missing) + " instances with (vi) false");
  fx.expect(inconsistent == 0, std::to_string(inconsistent) + " inconsistent reports");
  return fx.done("200 instances, " + std::to_string(holds) + " with the conditions true");
}

Outcome ac6() {
  Facts fx;
  Rng rng(6001);
  int failed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 5);
    const double tau = uniform(rng, 0.2, 2.0);
    SymMatrix d;
    SymMatrix b;
    double sigma = 0.0;
    do {
      d = random_admissible_d(rng, n);
      b = random_spectrum(rng, n, -1.0, 3.0);
      sigma = jacobian_condition_sigma(d, b, tau);
    } while (!(sigma > 1e-6));
    if (std::isinf(sigma)) sigma = 1.0;
    if (!perturbation_stability(d, b, tau, sigma, 50, 1e-4, static_cast<std::uint64_t>(trial))) ++failed;
  }
  fx.expect(failed == 0, std::to_string(failed) + " instances broke the sigma/4 bound");
  return fx.done("100 instances x 50 perturbations");
}

Outcome ac7() {
  Facts fx;
  Rng rng(7001);
  int done = 0;
  int max_iter = 0;
  double worst_q = 0.0;
  double worst_err = 0.0;
  while (done < 50) {
    const Eigen::Index n = uniform_int(rng, 1, 10);
    const auto inst =
        planted_instance(rng, PlantedKind::l1, n, random_spectrum(rng, n, 0.2, 4.0), uniform(rng, 0.3, 1.5), 0.0);
    const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
    const auto desc = second_order_descriptor(inst.problem.phi(), st.x_bar, st.v_bar);
    if (!check_ssosc(desc, inst.problem.hessian(st.x_bar)).certified()) continue;
    ++done;
    const Vector z0 = st.z_bar + 1e-2 * random_unit(rng, n);
    const auto t = solve_normal_map(inst.problem, z0);
    const int iters = static_cast<int>(t.step_types.size());
    max_iter = std::max(max_iter, iters);
    fx.expect(t.converged && iters <= 15, "instance " + std::to_string(done) + " took " + std::to_string(iters));
    if (t.iterates.size() >= 2) {
      const double q = rate_profile(t, st.z_bar).quotients.back();
      worst_q = std::max(worst_q, q);
      fx.expect(q <= 0.1, fmt("final quotient %.3g", q));
    }
    const auto oracle = sign_enumeration_oracle(inst.problem.quadratic_a(), inst.problem.quadratic_b(),
                                                inst.problem.phi());
    const Vector x = prox_eval(inst.problem.phi(), inst.problem.tau(), t.iterates.back());
    const double err = oracle ? (*oracle - x).norm() : INFINITY;
    worst_err = std::max(worst_err, err);
    fx.expect(err <= 1e-9, fmt("oracle mismatch %.3g", err));
  }
  return fx.done("max iterations " + std::to_string(max_iter) + fmt(", worst quotient %.2e", worst_q) +
                 fmt(", oracle error %.1e", worst_err));
}

// Catalog points with a nontrivial second-order structure: z is built so
// that x = prox_1(z) lands on kinks, v = z - x.
struct CatalogPoint {
  ProxSpec phi;
  Vector x;
  Vector v;
};

CatalogPoint point_from_z(const ProxSpec& phi, const Vector& z) {
  const Vector x = prox_eval(phi, 1.0, z);
  return {phi, x, z - x};
}

Vector pick(Rng& rng, std::initializer_list<double> choices) {
  std::vector<double> c(choices);
  return vec({c[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(c.size()) - 1))]});
}

CatalogPoint catalog_point(Rng& rng, int member) {
  switch (member) {
    case 0: {  // l1, weight 1: |z_i| = 1 exactly is degenerate, |z_i| < 0.9 strict
      const Eigen::Index n = uniform_int(rng, 2, 5);
      Vector z(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const int r = uniform_int(rng, 0, 2);
        const double s = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        z(i) = r == 0 ? s : (r == 1 ? s * uniform(rng, 0.0, 0.9) : s * uniform(rng, 1.2, 3.0));
      }
      return point_from_z(ProxSpec::l1(n, 1.0), z);
    }
    case 1: {  // orthant: z_i = 0 degenerate, negative strict
      const Eigen::Index n = uniform_int(rng, 2, 5);
      Vector z(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const int r = uniform_int(rng, 0, 2);
        z(i) = r == 0 ? 0.0 : (r == 1 ? -uniform(rng, 0.2, 2.0) : uniform(rng, 0.2, 2.0));
      }
      return point_from_z(ProxSpec::orthant(n), z);
    }
    case 2: {  // abs cone: boundary ray with strict normal, or the apex
      const double s = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      const double a = uniform(rng, 0.3, 2.0);
      const double c = uniform(rng, 0.3, 2.0);
      const Vector z = uniform_int(rng, 0, 3) == 0 ? Vector(vec({-c, 0.2 * c}))
                                                   : Vector(vec({a - c, s * (a + c)}));
      return point_from_z(ProxSpec::abs_cone(), z);
    }
    case 3: {  // group l2 on {0,1},{2}: zero block strict, zero block degenerate, nonzero block
      Vector z = Vector::Zero(3);
      const Vector u = random_unit(rng, 2);
      const int r = uniform_int(rng, 0, 2);
      const double scale = r == 0 ? uniform(rng, 0.1, 0.8) : (r == 1 ? 1.0 : uniform(rng, 1.5, 3.0));
      z.head(2) = scale * u;
      z(2) = pick(rng, {-2.0, -0.5, 0.5, 1.0})(0);
      return point_from_z(ProxSpec::group_l2(1.0, {{0, 1}, {2}}), z);
    }
    default: {  // support of a triangle: v on an edge, at a vertex, or inside
      const ProxSpec tri = ProxSpec::polyhedral_support({vec({0, 0}), vec({1, 0}), vec({0, 1})}, {});
      const int r = uniform_int(rng, 0, 2);
      Vector z;
      if (r == 0) {
        const double t = uniform(rng, 0.1, 0.9);
        z = vec({t, 1 - t}) + uniform(rng, 0.2, 2.0) * vec({1, 1});
      } else if (r == 1) {
        z = vec({1, 0}) + uniform(rng, 0.2, 1.0) * vec({1, uniform(rng, -0.8, 0.8)});
      } else {
        z = vec({uniform(rng, 0.1, 0.4), uniform(rng, 0.1, 0.4)});
      }
      return point_from_z(tri, z);
    }
  }
}

Outcome ac8() {
  Facts fx;
  Rng rng(8001);
  int in_cone = 0;
  int off_aff = 0;
  std::vector<int> per_member(5, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 5000 && (in_cone < 50 || off_aff < 50); ++trial) {
    const int member = trial % 5;
    const auto pt = catalog_point(rng, member);
    const auto desc = second_order_descriptor(pt.phi, pt.x, pt.v);
    const Eigen::Index n = pt.phi.n;
    const Matrix gens = desc.s_cone.generator_matrix();
    if (in_cone < 50 && gens.cols() > 0) {
      Vector w(gens.cols());
      for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = uniform(rng, 0.1, 1.0);
      Vector h = gens * w;
      if (h.norm() > 1e-8) {
        h /= h.norm();
        const double want = h.dot(desc.q.mat() * h);
        const auto e = estimate_d2(pt.phi, pt.x, pt.v, h, default_t_grid(), 20, static_cast<std::uint64_t>(trial));
        const double err = std::abs(e.estimate - want);
        worst = std::max(worst, err / std::max(1e-3, 1e-2 * std::abs(want)));
        fx.expect(!e.diverging && err <= std::max(1e-3, 1e-2 * std::abs(want)),
                  kind_name(pt.phi.kind) + fmt(" in-cone error %.3g", err));
        ++in_cone;
        ++per_member[static_cast<std::size_t>(member)];
      }
    }
    if (off_aff < 50 && desc.aff_s.dim() < n) {
      const Matrix comp = Matrix::Identity(n, n) - desc.aff_s.projector();
      const Vector out = comp * gaussian_vector(rng, n);
      if (out.norm() > 1e-3) {
        Vector h = out / out.norm();
        if (gens.cols() > 0) h += 0.5 * gens.col(0) / std::max(1e-12, gens.col(0).norm());
        const auto e = estimate_d2(pt.phi, pt.x, pt.v, h, default_t_grid(), 20, static_cast<std::uint64_t>(trial));
        fx.expect(e.diverging, kind_name(pt.phi.kind) + " off-hull direction not diverging");
        ++off_aff;
      }
    }
  }
  fx.expect(in_cone == 50 && off_aff == 50, "could not sample enough directions");
  for (int m = 0; m < 5; ++m) fx.expect(per_member[static_cast<std::size_t>(m)] > 0, "a catalog member was skipped");
  return fx.done(std::to_string(in_cone) + " in-cone, " + std::to_string(off_aff) + " off-hull" +
                 fmt(", worst relative error %.2f of tolerance", worst));
}

struct Criterion {
  std::string id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {"AC1", "indefinite orthant example", 0.1, ac1},
      {"AC2", "cone example residual and regularity", 1.0, ac2},
      {"AC3", "arc example limit Jacobian and P1", 1.0, ac3_arc},
      {"AC3", "cusp example Hessians and divergence", 1.0, ac3_cusp},
      {"AC4", "core decomposition, ordering and combinations", 5.0, ac4},
      {"AC5", "condition consistency on planted instances", 30.0, ac5},
      {"AC6", "perturbation stability", 5.0, ac6},
      {"AC7", "local superlinear convergence on lasso", 10.0, ac7},
      {"AC8", "second subderivative difference quotients", 10.0, ac8},
  };
  bool all_ok = true;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool ok = o.ok && in_time;
    all_ok = all_ok && ok;
    std::printf("%s %s: %s (%.3f s of %.1f s%s) %s\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(), secs,
                c.limit_s, in_time ? "" : ", too slow", o.detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
