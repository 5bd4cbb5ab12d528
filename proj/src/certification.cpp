#include "ssn/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ssn/convex_solvers.hpp"
#include "ssn/errors.hpp"
#include "ssn/serialization.hpp"

namespace ssn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VerdictStatus exact_status(bool holds, bool exhaustive) {
  if (exhaustive) return holds ? VerdictStatus::certified_true : VerdictStatus::certified_false;
  // A failing genuine element is a certificate; a pass over a partial list is not.
  return holds ? VerdictStatus::probe_true : VerdictStatus::certified_false;
}

VerdictStatus probe_status(bool holds) { return holds ? VerdictStatus::probe_true : VerdictStatus::probe_false; }

nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

Vector random_in_ball(std::mt19937_64& rng, Eigen::Index n, double radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = gauss(rng);
  const double norm = g.norm();
  if (norm == 0.0) return Vector::Zero(n);
  return g * (radius * std::pow(unif(rng), 1.0 / static_cast<double>(n)) / norm);
}

// Convex weights over m elements: alternately dense Dirichlet(1) and
// supported on a random pair.
Vector random_weights(std::mt19937_64& rng, std::size_t m, int sample) {
  std::exponential_distribution<double> expo(1.0);
  Vector w = Vector::Zero(static_cast<Eigen::Index>(m));
  if (sample % 2 == 0 || m < 3) {
    for (std::size_t i = 0; i < m; ++i) w(static_cast<Eigen::Index>(i)) = expo(rng);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    w(static_cast<Eigen::Index>(a)) = expo(rng);
    w(static_cast<Eigen::Index>(b)) = expo(rng);
  }
  return w / w.sum();
}

struct RangeForm {
  Matrix n;   // D H D + (1/tau) D (I - D) on range(D)
  Matrix d2;  // D^2 on range(D)
  bool trivial = true;
};

RangeForm range_form(const SymMatrix& d, const SymMatrix& hess, double tau) {
  RangeForm f;
  const Subspace r = range_of(d, 1e-10);
  if (r.is_trivial()) return f;
  const Matrix& b = r.basis();
  const Eigen::Index n = d.dim();
  const Matrix dm = d.mat();
  const Matrix full = dm * hess.mat() * dm + (dm * (Matrix::Identity(n, n) - dm)) / tau;
  f.n = b.transpose() * full * b;
  f.d2 = b.transpose() * dm * dm * b;
  f.trivial = false;
  return f;
}

// Largest sigma with N >= sigma D^2 on range(D): the smallest generalized
// eigenvalue of the pencil (N, D^2), which is positive definite in D^2.
double form_sigma(const RangeForm& f) {
  if (f.trivial) return kInf;
  const Eigen::LLT<Matrix> llt(f.d2);
  const Matrix li = llt.matrixL().solve(Matrix::Identity(f.d2.rows(), f.d2.cols()));
  return min_eigenvalue(SymMatrix(Matrix(li * f.n * li.transpose())));
}

bool form_holds(const RangeForm& f, double sigma) {
  if (f.trivial) return true;
  return form_sigma(f) >= sigma - 1e-9 * std::max(1.0, std::abs(sigma));
}

SymMatrix combine(const std::vector<SymMatrix>& elems, const Vector& w) {
  Matrix m = Matrix::Zero(elems.front().dim(), elems.front().dim());
  for (std::size_t i = 0; i < elems.size(); ++i) m += w(static_cast<Eigen::Index>(i)) * elems[i].mat();
  return SymMatrix(m);
}

}  // namespace

std::string condition_name(ConditionId id) {
  switch (id) {
    case ConditionId::i: return "i";
    case ConditionId::ii_growth: return "ii_growth";
    case ConditionId::iii_smr_subdiff: return "iii_smr_subdiff";
    case ConditionId::iv_smr_nor: return "iv_smr_nor";
    case ConditionId::v_cd: return "v_cd";
    case ConditionId::vi_bd: return "vi_bd";
    case ConditionId::vii_bd_gj: return "vii_bd_gj";
    case ConditionId::viii_cd_gj: return "viii_cd_gj";
    case ConditionId::ix_nbhd_gj: return "ix_nbhd_gj";
    case ConditionId::x_smr_nat: return "x_smr_nat";
    case ConditionId::P1: return "P1";
    case ConditionId::P2: return "P2";
  }
  return "?";
}

std::string status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::certified_true: return "certified_true";
    case VerdictStatus::certified_false: return "certified_false";
    case VerdictStatus::probe_true: return "probe_true";
    case VerdictStatus::probe_false: return "probe_false";
    case VerdictStatus::not_applicable: return "not_applicable";
  }
  return "?";
}

bool ConditionVerdict::certified() const {
  return status == VerdictStatus::certified_true || status == VerdictStatus::certified_false;
}

bool ConditionVerdict::probe() const {
  return status == VerdictStatus::probe_true || status == VerdictStatus::probe_false;
}

bool ConditionVerdict::holds() const {
  return status == VerdictStatus::certified_true || status == VerdictStatus::probe_true;
}

const ConditionVerdict& CertificationReport::get(ConditionId id) const {
  for (const auto& v : verdicts)
    if (v.id == id) return v;
  throw std::out_of_range("CertificationReport: no verdict " + condition_name(id));
}

// ---------------------------------------------------------------------------

ConditionVerdict check_ssosc(const SecondOrderDescriptor& desc, const SymMatrix& hess_f, double tol_pos) {
  require_same_dim(hess_f.dim(), desc.q.dim(), "check_ssosc");
  ConditionVerdict v;
  v.id = ConditionId::i;
  const double sigma = min_eig_on_subspace(hess_f + desc.q, desc.aff_s);
  v.sigma = sigma;
  v.status = sigma > tol_pos ? VerdictStatus::certified_true : VerdictStatus::certified_false;
  v.detail["aff_dim"] = desc.aff_s.dim();
  if (desc.aff_s.is_trivial()) v.detail["vacuous"] = true;
  return v;
}

double jacobian_condition_sigma(const SymMatrix& d, const SymMatrix& hess, double tau) {
  require_same_dim(d.dim(), hess.dim(), "jacobian_condition_sigma");
  return form_sigma(range_form(d, hess, tau));
}

bool jacobian_condition_holds(const SymMatrix& d, const SymMatrix& hess, double tau, double sigma) {
  require_same_dim(d.dim(), hess.dim(), "jacobian_condition_holds");
  return form_holds(range_form(d, hess, tau), sigma);
}

JacobianCondition check_jacobian_condition(const SymMatrix& hess, double tau, const BdProxSet& bd,
                                           const JacobianConditionOptions& opts) {
  if (bd.elements.empty()) throw PreconditionError("check_jacobian_condition: empty Jacobian set");
  JacobianCondition out;
  out.bd.id = ConditionId::vii_bd_gj;
  out.clarke.id = ConditionId::viii_cd_gj;

  double sigma_bd = kInf;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& d : bd.elements) {
    const double s = form_sigma(range_form(d, hess, tau));
    per.push_back(json_number(s));
    sigma_bd = std::min(sigma_bd, s);
  }
  out.bd.sigma = sigma_bd;
  out.bd.status = exact_status(sigma_bd > opts.tol_pos, bd.exhaustive);
  out.bd.detail["element_sigma"] = per;
  out.bd.detail["exhaustive"] = bd.exhaustive;

  double sigma_cl = sigma_bd;
  int below = 0;
  int checked = 0;
  if (bd.elements.size() > 1 && std::isfinite(sigma_bd)) {
    std::mt19937_64 rng(opts.seed);
    for (int s = 0; s < opts.clarke_samples; ++s) {
      const SymMatrix c = combine(bd.elements, random_weights(rng, bd.elements.size(), s));
      const RangeForm f = range_form(c, hess, tau);
      ++checked;
      if (!form_holds(f, sigma_bd)) {
        ++below;
        sigma_cl = std::min(sigma_cl, form_sigma(f));
      }
    }
  }
  out.clarke.sigma = sigma_cl;
  out.clarke.detail["combinations_checked"] = checked;
  out.clarke.detail["combinations_below_bd_sigma"] = below;
  if (out.bd.status == VerdictStatus::certified_false) {
    out.clarke.status = VerdictStatus::certified_false;
    out.clarke.detail["reason"] = "a Bouligand element violates the bound";
  } else {
    out.clarke.status = probe_status(sigma_cl > opts.tol_pos);
  }
  return out;
}

JacobianCondition check_jacobian_condition(const CompositeProblem& p, const StationaryTriple& st,
                                           const JacobianConditionOptions& opts) {
  return check_jacobian_condition(p.hessian(st.x_bar), p.tau(), bd_prox_set(p.phi(), p.tau(), st.z_bar), opts);
}

ConditionVerdict check_P1(const BdProxSet& d_set, const SecondOrderDescriptor& desc, double tau, double rho) {
  ConditionVerdict v;
  v.id = ConditionId::P1;
  bool all = true;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& d : d_set.elements) {
    const CoreDecomposition cd = core_decompose(d, tau, rho);
    const bool inside = desc.aff_s.contains(cd.range, 1e-9);
    const double margin = psd_margin(cd.core, compress(desc.q, cd.range));
    const bool ok = inside && margin >= -1e-9;
    all = all && ok;
    per.push_back({{"range_in_aff", inside}, {"core_margin", margin}, {"ok", ok}});
  }
  v.status = exact_status(all, d_set.exhaustive);
  v.detail["elements"] = per;
  return v;
}

ConditionVerdict check_P2(const SecondOrderDescriptor& desc, const BdProxSet& d_set, double tau) {
  if (d_set.elements.empty()) throw PreconditionError("check_P2: empty Jacobian set");
  const Eigen::Index n = desc.q.dim();
  ConditionVerdict v;
  v.id = ConditionId::P2;
  const Matrix pa = desc.aff_s.projector();
  const Matrix inv = (Matrix::Identity(n, n) + tau * desc.q.mat()).partialPivLu().inverse();
  const Matrix target = pa * inv * pa;

  Matrix pts(n * n, static_cast<Eigen::Index>(d_set.elements.size()));
  for (std::size_t i = 0; i < d_set.elements.size(); ++i) {
    const Matrix diff = d_set.elements[i].mat() - target;
    pts.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(diff.data(), n * n);
  }
  const MinNormPoint mnp = min_norm_point(pts);
  const double dist = mnp.point.norm();
  const bool member = dist <= 1e-8;
  if (member) {
    v.status = VerdictStatus::certified_true;  // inside the hull of genuine elements
  } else {
    v.status = d_set.exhaustive ? VerdictStatus::certified_false : VerdictStatus::probe_false;
  }
  v.detail["distance"] = dist;
  v.detail["weights"] = vec_json(mnp.weights);
  return v;
}

ConditionVerdict bd_regularity(const std::vector<Matrix>& m_set, bool exhaustive) {
  ConditionVerdict v;
  v.id = ConditionId::vi_bd;
  if (m_set.empty()) return v;
  bool all = true;
  double worst = kInf;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& m : m_set) {
    const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    const bool ok = smin > 0.0 && smin >= 1e-10 * smax;
    all = all && ok;
    worst = std::min(worst, smax > 0.0 ? smin / smax : 0.0);
    per.push_back(smin);
  }
  v.status = exact_status(all, exhaustive);
  v.sigma = worst;
  v.detail["sigma_min"] = per;
  return v;
}

ConditionVerdict smr_probe(ResidualMapKind map, const CompositeProblem& p, const Vector& center,
                           const SmrOptions& opts) {
  require_same_dim(center.size(), p.dim(), "smr_probe");
  if (!(opts.radius > 0.0)) throw PreconditionError("smr_probe: radius must be positive");
  if (opts.pairs < 1000) throw PreconditionError("smr_probe: at least 1000 pairs are required");
  ConditionVerdict v;
  v.id = map == ResidualMapKind::nat   ? ConditionId::x_smr_nat
         : map == ResidualMapKind::nor ? ConditionId::iv_smr_nor
                                       : ConditionId::iii_smr_subdiff;

  // (domain point, image point) for a sample u.
  auto graph = [&](const Vector& u) -> std::pair<Vector, Vector> {
    switch (map) {
      case ResidualMapKind::nat: return {u, natural_residual(p, u)};
      case ResidualMapKind::nor: return {u, normal_map(p, u)};
      case ResidualMapKind::subdiff: return {prox_eval(p.phi(), p.tau(), u), normal_map(p, u)};
    }
    return {u, u};
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::Index n = p.dim();
  double best = kInf;
  Vector wa;
  Vector wb;
  int used = 0;
  for (int k = 0; k < opts.pairs; ++k) {
    const double r = opts.radius * std::pow(10.0, -6.0 * unif(rng));
    const Vector a = center + random_in_ball(rng, n, r);
    const Vector b = center + random_in_ball(rng, n, r);
    const auto [xa, ya] = graph(a);
    const auto [xb, yb] = graph(b);
    const double dx = (xa - xb).norm();
    if (!(dx > 1e-15 * std::max(1.0, xa.norm()))) continue;
    ++used;
    const double q = (ya - yb).norm() / dx;
    if (q < best) {
      best = q;
      wa = xa;
      wb = xb;
    }
  }
  v.detail["pairs_used"] = used;
  if (used == 0) return v;
  v.sigma = best;
  v.status = probe_status(best >= 1e-6);
  v.detail["witness"] = {{"a", vec_json(wa)}, {"b", vec_json(wb)}, {"quotient", best}};
  return v;
}

bool perturbation_stability(const SymMatrix& d, const SymMatrix& b, double tau, double sigma, int trials,
                            double delta, std::uint64_t seed) {
  require_same_dim(d.dim(), b.dim(), "perturbation_stability");
  if (!jacobian_condition_holds(d, b, tau, sigma)) {
    throw PreconditionError("perturbation_stability: D, B do not satisfy the bound with sigma");
  }
  if (delta <= 0.0 || trials <= 0) return true;
  const Eigen::Index n = d.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto perturb = [&]() {
    Matrix e(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) e(i, j) = gauss(rng);
    e = (0.5 * (e + e.transpose())).eval();
    return Matrix(e * (delta * unif(rng) / e.norm()));
  };
  int done = 0;
  for (int attempt = 0; done < trials && attempt < trials * 1000; ++attempt) {
    const SymMatrix dt(Matrix(d.mat() + perturb()));
    const auto e = jacobi_eigen(dt);
    if (e.values(0) < 0.0 || e.values(n - 1) > 1.0) continue;  // outside the admissible band
    const SymMatrix bt(Matrix(b.mat() + perturb()));
    ++done;
    if (!jacobian_condition_holds(dt, bt, tau, sigma / 4.0)) return false;
  }
  if (done < trials) throw PreconditionError("perturbation_stability: could not sample admissible perturbations");
  return true;
}

ConditionVerdict growth_probe(const CompositeProblem& p, const StationaryTriple& st, int samples, double radius,
                              std::uint64_t seed) {
  ConditionVerdict v;
  v.id = ConditionId::ii_growth;
  std::mt19937_64 rng(seed);
  const double psi0 = p.objective(st.x_bar);
  double best = kInf;
  int used = 0;
  for (int k = 0; k < samples; ++k) {
    Vector x = st.x_bar + random_in_ball(rng, p.dim(), radius);
    double psi = p.objective(x);
    if (!std::isfinite(psi)) {
      // Infeasible sample: use the nearest point of the domain instead.
      x = prox_eval(p.phi(), p.tau(), x);
      psi = p.objective(x);
    }
    const double d2 = (x - st.x_bar).squaredNorm();
    if (!std::isfinite(psi) || d2 == 0.0) continue;
    ++used;
    best = std::min(best, 2.0 * (psi - psi0) / d2);
  }
  v.detail["samples_used"] = used;
  if (used == 0) return v;
  v.sigma = best;
  v.status = probe_status(best > 1e-9);
  return v;
}

// ---------------------------------------------------------------------------

CertificationReport cross_check(const CompositeProblem& p, const StationaryTriple& st,
                                const CrossCheckOptions& opts) {
  CertificationReport rep;
  rep.problem_hash = problem_hash(p);
  const double tau = p.tau();
  const SecondOrderDescriptor desc = second_order_descriptor(p.phi(), st.x_bar, st.v_bar);
  const SymMatrix hess = p.hessian(st.x_bar);
  const BdProxSet bd = bd_prox_set(p.phi(), tau, st.z_bar);

  ConditionVerdict cond_i = check_ssosc(desc, hess, opts.tol_pos);
  ConditionVerdict p1 = check_P1(bd, desc, tau, p.phi().rho);
  ConditionVerdict p2 = check_P2(desc, bd, tau);

  std::vector<Matrix> mset;
  for (const auto& d : bd.elements) mset.push_back(m_nor_element(p, st.x_bar, d));
  ConditionVerdict vi = bd_regularity(mset, bd.exhaustive);
  const bool ssonc = *cond_i.sigma >= -opts.tol_pos;
  vi.detail["second_order_necessary"] = ssonc;

  JacobianCondition jc = check_jacobian_condition(hess, tau, bd, {opts.clarke_samples, opts.seed, opts.tol_pos});
  ConditionVerdict vii = jc.bd;
  ConditionVerdict viii = jc.clarke;
  if (p1.status == VerdictStatus::certified_true && vii.certified()) {
    const bool truth = vii.holds() && (viii.sigma && *viii.sigma > opts.tol_pos);
    viii.status = truth ? VerdictStatus::certified_true : VerdictStatus::certified_false;
    viii.detail["promoted"] = "structural condition P1 certified";
  }

  ConditionVerdict v;
  v.id = ConditionId::v_cd;
  if (viii.status == VerdictStatus::certified_true) {
    v.status = VerdictStatus::certified_true;
    v.sigma = viii.sigma;
    v.detail["implied_by"] = "viii_cd_gj";
  } else if (vi.status == VerdictStatus::certified_false) {
    v.status = VerdictStatus::certified_false;
    v.detail["implied_by"] = "vi_bd";
  } else {
    std::mt19937_64 rng(opts.seed + 1);
    double worst = kInf;
    auto rel_smin = [](const Matrix& m) {
      const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
      return s(s.size() - 1) / std::max(s(0), 1e-300);
    };
    std::vector<double> dets;
    for (const auto& m : mset) {
      worst = std::min(worst, rel_smin(m));
      dets.push_back(m.determinant());
    }
    // Opposite determinant signs put a singular matrix on the segment between
    // the two elements; bisect for it.
    for (std::size_t a = 0; a < mset.size(); ++a) {
      for (std::size_t b = a + 1; b < mset.size(); ++b) {
        if (!(dets[a] * dets[b] < 0.0)) continue;
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double dm = ((1.0 - mid) * mset[a] + mid * mset[b]).determinant();
          (dm * dets[a] > 0.0 ? lo : hi) = mid;
        }
        const double t = 0.5 * (lo + hi);
        const double q = rel_smin((1.0 - t) * mset[a] + t * mset[b]);
        if (q < worst) {
          worst = q;
          v.detail["singular_segment"] = {{"from", a}, {"to", b}, {"t", t}};
        }
      }
    }
    if (mset.size() > 1) {
      for (int k = 0; k < opts.clarke_samples; ++k) {
        const Vector w = random_weights(rng, mset.size(), k);
        Matrix m = Matrix::Zero(p.dim(), p.dim());
        for (std::size_t i = 0; i < mset.size(); ++i) m += w(static_cast<Eigen::Index>(i)) * mset[i];
        worst = std::min(worst, rel_smin(m));
      }
    }
    v.sigma = worst;
    v.status = probe_status(worst >= 1e-10);
  }

  ConditionVerdict ii;
  ii.id = ConditionId::ii_growth;
  ConditionVerdict iii;
  iii.id = ConditionId::iii_smr_subdiff;
  ConditionVerdict iv;
  iv.id = ConditionId::iv_smr_nor;
  ConditionVerdict ix;
  ix.id = ConditionId::ix_nbhd_gj;
  ConditionVerdict x;
  x.id = ConditionId::x_smr_nat;
  if (opts.run_probes) {
    ii = growth_probe(p, st, opts.growth_samples, opts.growth_radius, opts.seed);
    SmrOptions so = opts.smr;
    so.seed = opts.seed;
    iii = smr_probe(ResidualMapKind::subdiff, p, st.z_bar, so);
    iv = smr_probe(ResidualMapKind::nor, p, st.z_bar, so);
    x = smr_probe(ResidualMapKind::nat, p, st.x_bar, so);

    std::mt19937_64 rng(opts.seed + 2);
    double sigma_ix = kInf;
    int evaluated = 0;
    for (int k = 0; k < opts.nbhd_points; ++k) {
      const Vector z = st.z_bar + random_in_ball(rng, p.dim(), opts.nbhd_radius);
      BdProxSet local;
      try {
        local = bd_prox_set(p.phi(), tau, z);
      } catch (const EnumerationUnavailable&) {
        continue;
      }
      const Vector xz = prox_eval(p.phi(), tau, z);
      const auto r = check_jacobian_condition(p.hessian(xz), tau, local,
                                              {opts.nbhd_clarke_samples, opts.seed + 3 + static_cast<std::uint64_t>(k),
                                               opts.tol_pos});
      sigma_ix = std::min(sigma_ix, *r.clarke.sigma);
      ++evaluated;
    }
    ix.detail["points_evaluated"] = evaluated;
    if (evaluated > 0) {
      ix.sigma = sigma_ix;
      ix.status = probe_status(sigma_ix > opts.tol_pos);
    }
  }

  rep.verdicts = {cond_i, ii, iii, iv, v, vi, vii, viii, ix, x, p1, p2};

  // Consensus over the certified members of the equivalence chain. The
  // invertibility statement joins the chain together with the second-order
  // necessary condition.
  Consensus& c = rep.consensus;
  std::vector<std::pair<std::string, bool>> truths;
  if (cond_i.certified()) truths.emplace_back("i", cond_i.holds());
  if (vi.certified()) truths.emplace_back("vi_bd", vi.holds() && ssonc);
  if (vii.certified()) truths.emplace_back("vii_bd_gj", vii.holds());
  if (viii.certified()) truths.emplace_back("viii_cd_gj", viii.holds());
  bool agree = true;
  for (const auto& t : truths) agree = agree && t.second == truths.front().second;
  const bool structural = p1.status == VerdictStatus::certified_true && p2.status == VerdictStatus::certified_true;
  if (!agree) {
    if (structural) {
      c.consistent = false;
      for (const auto& t : truths) c.clashing.push_back(t.first);
    } else {
      if (p1.status != VerdictStatus::certified_true) c.notes.push_back("expected divergence: (P.1) fails");
      if (p2.status != VerdictStatus::certified_true) c.notes.push_back("expected divergence: (P.2) fails");
    }
  }
  if (vi.certified() && cond_i.certified() && vi.holds() != cond_i.holds() && !ssonc) {
    c.notes.push_back("expected divergence: strong second-order necessary condition fails");
  }
  if (cond_i.certified()) {
    for (const auto& pv : {ii, iii, iv, ix, x, v}) {
      if (pv.probe() && pv.holds() != cond_i.holds()) {
        c.warnings.push_back("probe " + condition_name(pv.id) + " disagrees with certified i");
      }
    }
  }
  return rep;
}

}  // namespace ssn
