#include "ssn/prox_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ssn/errors.hpp"

namespace ssn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxPatterns = std::size_t{1} << 16;

// |a + d| - |a| without cancellation when a + d keeps the sign of a.
double abs_increment(double a, double d) {
  if (a > 0.0 && a + d >= 0.0) return d;
  if (a < 0.0 && a + d <= 0.0) return -d;
  return std::abs(a + d) - std::abs(a);
}

// ||w + e|| - ||w||.
double norm_increment(const Vector& w, const Vector& e) {
  const double a = w.norm();
  const double b = (w + e).norm();
  if (a + b == 0.0) return 0.0;
  return (2.0 * w.dot(e) + e.squaredNorm()) / (a + b);
}

struct Factor {
  std::vector<Eigen::Index> idx;
  std::vector<Matrix> options;
};

// Block-diagonal Cartesian product; the first factor varies slowest.
std::vector<SymMatrix> product_of_factors(Eigen::Index n, const std::vector<Factor>& factors) {
  std::size_t total = 1;
  for (const auto& f : factors) {
    total *= f.options.size();
    if (total > kMaxPatterns) throw EnumerationUnavailable("bd_prox_set: more than 2^16 patterns");
  }
  std::vector<SymMatrix> out;
  out.reserve(total);
  std::vector<std::size_t> pick(factors.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    Matrix d = Matrix::Zero(n, n);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const Matrix& block = factors[f].options[pick[f]];
      const auto& idx = factors[f].idx;
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
          d(idx[a], idx[b]) = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    out.emplace_back(d);
    for (std::size_t f = factors.size(); f-- > 0;) {
      if (++pick[f] < factors[f].options.size()) break;
      pick[f] = 0;
    }
  }
  return out;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

Vector take(const Vector& x, const std::vector<Eigen::Index>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = x(idx[i]);
  return out;
}

// Half-disk H = {w : ||w - (0,1)|| <= 1, w1 >= 0}.
Eigen::Vector2d project_halfdisk(const Eigen::Vector2d& y) {
  if (y(0) < 0.0) return {0.0, std::clamp(y(1), 0.0, 2.0)};
  const Eigen::Vector2d c(0.0, 1.0);
  const Eigen::Vector2d d = y - c;
  const double r = d.norm();
  return r > 1.0 ? Eigen::Vector2d(c + d / r) : y;
}

Eigen::Vector2d project_scaled_halfdisk(const Eigen::Vector2d& w, double s) {
  if (s <= 0.0) return Eigen::Vector2d::Zero();
  return s * project_halfdisk(w / s);
}

double cusp_boundary(double x1) { return (2.0 / 3.0) * std::pow(std::abs(x1), 1.5); }

bool arc_strict_interior(const Vector& y, double margin) {
  const double a = std::abs(y(2));
  if (a >= 1.0 - margin) return false;
  const double s = 1.0 - a;
  return y(0) > margin && std::hypot(y(0), y(1) - s) < s - margin;
}

SymMatrix cusp_hessian(const Vector& x) {
  const double a = std::abs(x(0));
  const double b = x(1);
  Matrix h(2, 2);
  h(0, 0) = 2.0 * a / (b * b);
  h(0, 1) = h(1, 0) = -2.0 * x(0) * a / (b * b * b);
  h(1, 1) = 2.0 * a * a * a / (b * b * b * b);
  return SymMatrix(h);
}

SymMatrix arc_hessian(const Vector& x) {
  const double n = std::hypot(x(0), x(1));
  const double n3 = n * n * n;
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = (n * n - x(0) * x(0)) / n3;
  h(0, 1) = h(1, 0) = -x(0) * x(1) / n3;
  h(1, 1) = (n * n - x(1) * x(1)) / n3;
  return SymMatrix(h);
}

void require_tau(double tau) {
  if (!(tau > 0.0)) throw PreconditionError("prox: tau must be positive");
}

}  // namespace

std::string kind_name(ProxKind kind) {
  switch (kind) {
    case ProxKind::zero: return "zero";
    case ProxKind::l1: return "l1";
    case ProxKind::indicator_orthant: return "indicator_orthant";
    case ProxKind::indicator_abs_cone: return "indicator_abs_cone";
    case ProxKind::group_l2: return "group_l2";
    case ProxKind::polyhedral_support: return "polyhedral_support";
    case ProxKind::support_arc_segment: return "support_arc_segment";
    case ProxKind::support_sharp_cusp: return "support_sharp_cusp";
  }
  return "?";
}

ProxKind kind_from_name(const std::string& name) {
  for (auto k : {ProxKind::zero, ProxKind::l1, ProxKind::indicator_orthant, ProxKind::indicator_abs_cone,
                 ProxKind::group_l2, ProxKind::polyhedral_support, ProxKind::support_arc_segment,
                 ProxKind::support_sharp_cusp}) {
    if (kind_name(k) == name) return k;
  }
  throw UnsupportedKind("unsupported phi kind '" + name + "'");
}

ProxSpec ProxSpec::zero(Eigen::Index n) {
  if (n < 1) throw PreconditionError("ProxSpec: n must be positive");
  ProxSpec s;
  s.kind = ProxKind::zero;
  s.n = n;
  return s;
}

ProxSpec ProxSpec::l1(Eigen::Index n, double weight) {
  if (n < 1) throw PreconditionError("ProxSpec: n must be positive");
  if (!(weight > 0.0)) throw PreconditionError("ProxSpec: l1 weight must be positive");
  ProxSpec s;
  s.kind = ProxKind::l1;
  s.n = n;
  s.weight = weight;
  return s;
}

ProxSpec ProxSpec::orthant(Eigen::Index n) {
  if (n < 1) throw PreconditionError("ProxSpec: n must be positive");
  ProxSpec s;
  s.kind = ProxKind::indicator_orthant;
  s.n = n;
  return s;
}

ProxSpec ProxSpec::abs_cone() {
  ProxSpec s;
  s.kind = ProxKind::indicator_abs_cone;
  s.n = 2;
  Matrix a(2, 2);
  a << -1.0, 1.0, -1.0, -1.0;
  s.set = std::make_shared<const Polyhedron>(Polyhedron::from_inequalities(a, Vector::Zero(2), Vector::Zero(2)));
  return s;
}

ProxSpec ProxSpec::group_l2(double weight, std::vector<std::vector<Eigen::Index>> blocks) {
  if (!(weight > 0.0)) throw PreconditionError("ProxSpec: group weight must be positive");
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += static_cast<Eigen::Index>(b.size());
  if (n < 1) throw PreconditionError("ProxSpec: group_l2 needs at least one block");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw PreconditionError("ProxSpec: empty group");
    for (auto i : b) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]++) {
        throw PreconditionError("ProxSpec: groups must partition 0..n-1");
      }
    }
  }
  ProxSpec s;
  s.kind = ProxKind::group_l2;
  s.n = n;
  s.weight = weight;
  s.blocks = std::move(blocks);
  return s;
}

ProxSpec ProxSpec::polyhedral_support(std::vector<Vector> vertices, std::vector<Vector> rays) {
  ProxSpec s;
  s.kind = ProxKind::polyhedral_support;
  s.set = std::make_shared<const Polyhedron>(Polyhedron::from_generators(vertices, rays));
  s.n = s.set->dim();
  s.vertices = std::move(vertices);
  s.rays = std::move(rays);
  return s;
}

ProxSpec ProxSpec::arc_segment() {
  ProxSpec s;
  s.kind = ProxKind::support_arc_segment;
  s.n = 3;
  return s;
}

ProxSpec ProxSpec::sharp_cusp() {
  ProxSpec s;
  s.kind = ProxKind::support_sharp_cusp;
  s.n = 2;
  return s;
}

// ---------------------------------------------------------------------------

double arc_support(const Vector& x) {
  require_same_dim(x.size(), 3, "arc_support");
  const double g = x(0) >= 0.0 ? std::hypot(x(0), x(1)) : std::abs(x(1));
  return std::max(std::abs(x(2)), x(1) + g);
}

double cusp_support(const Vector& x) {
  require_same_dim(x.size(), 2, "cusp_support");
  if (x(1) < 0.0) {
    const double a = std::abs(x(0));
    return a * a * a / (3.0 * x(1) * x(1));
  }
  return (x(0) == 0.0 && x(1) == 0.0) ? 0.0 : kInf;
}

Vector project_arc_set(const Vector& y) {
  require_same_dim(y.size(), 3, "project_arc_set");
  const Eigen::Vector2d w(y(0), y(1));
  const double u = y(2);
  // Derivative of alpha -> dist^2(w, (1-alpha)H) + dist^2(u, [-alpha, alpha]).
  auto slope = [&](double alpha) {
    const double s = 1.0 - alpha;
    const Eigen::Vector2d p = s > 0.0 ? project_halfdisk(w / s) : Eigen::Vector2d::Zero();
    return 2.0 * (w - s * p).dot(p) - 2.0 * std::max(0.0, std::abs(u) - alpha);
  };
  double alpha = 0.0;
  if (slope(0.0) < 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    alpha = hi;
  }
  const Eigen::Vector2d pw = project_scaled_halfdisk(w, 1.0 - alpha);
  Vector out(3);
  out << pw(0), pw(1), std::clamp(u, -alpha, alpha);
  return out;
}

Vector project_cusp_set(const Vector& y) {
  require_same_dim(y.size(), 2, "project_cusp_set");
  if (y(1) >= cusp_boundary(y(0))) return y;
  // Boundary point b(s) = (s|s|, 2/3 |s|^3); the projection lies within the
  // vertical gap d0 of y1.
  const double d0 = cusp_boundary(y(0)) - y(1);
  auto to_s = [](double t) { return std::copysign(std::sqrt(std::abs(t)), t); };
  const double s_lo = to_s(y(0) - d0);
  const double s_hi = to_s(y(0) + d0);
  auto point = [](double s) {
    return Eigen::Vector2d(s * std::abs(s), (2.0 / 3.0) * std::abs(s) * s * s);
  };
  auto dist2 = [&](double s) { return (Eigen::Vector2d(y(0), y(1)) - point(s)).squaredNorm(); };
  // Stationarity of dist2 away from s = 0.
  auto stat = [&](double s) {
    const double a = std::abs(s);
    return s * a - y(0) + s * ((2.0 / 3.0) * a * a * a - y(1));
  };

  std::vector<double> candidates{s_lo, s_hi};
  if (s_lo <= 0.0 && s_hi >= 0.0) candidates.push_back(0.0);
  constexpr int kGrid = 400;
  double prev_s = s_lo;
  double prev_v = stat(s_lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / kGrid;
    const double v = stat(s);
    if (prev_v == 0.0) candidates.push_back(prev_s);
    if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double lo = prev_s;
      double hi = s;
      const bool rising = prev_v < 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        ((stat(mid) < 0.0) == rising ? lo : hi) = mid;
      }
      candidates.push_back(0.5 * (lo + hi));
    }
    prev_s = s;
    prev_v = v;
  }
  double best = candidates.front();
  for (double c : candidates)
    if (dist2(c) < dist2(best)) best = c;
  const Eigen::Vector2d p = point(best);
  return Vector(p);
}

// ---------------------------------------------------------------------------

double phi_value(const ProxSpec& spec, const Vector& x) {
  require_same_dim(x.size(), spec.n, "phi_value");
  switch (spec.kind) {
    case ProxKind::zero: return 0.0;
    case ProxKind::l1: return spec.weight * x.lpNorm<1>();
    case ProxKind::indicator_orthant: return x.minCoeff() >= 0.0 ? 0.0 : kInf;
    case ProxKind::indicator_abs_cone: return x(0) >= std::abs(x(1)) ? 0.0 : kInf;
    case ProxKind::group_l2: {
      double s = 0.0;
      for (const auto& b : spec.blocks) s += take(x, b).norm();
      return spec.weight * s;
    }
    case ProxKind::polyhedral_support: return spec.set->support(x);
    case ProxKind::support_arc_segment: return arc_support(x);
    case ProxKind::support_sharp_cusp: return cusp_support(x);
  }
  return kInf;
}

double phi_increment(const ProxSpec& spec, const Vector& x, const Vector& d) {
  require_same_dim(x.size(), spec.n, "phi_increment");
  require_same_dim(d.size(), spec.n, "phi_increment");
  const Vector y = x + d;
  switch (spec.kind) {
    case ProxKind::zero: return 0.0;
    case ProxKind::l1: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += abs_increment(x(i), d(i));
      return spec.weight * s;
    }
    case ProxKind::indicator_orthant: return phi_value(spec, y);
    case ProxKind::indicator_abs_cone: {
      // Slack x1 - |x2| updated by increments, so tiny steps along the
      // boundary keep their sign.
      if (!std::isfinite(phi_value(spec, x))) return kInf;
      const double slack = (x(0) - std::abs(x(1))) + (d(0) - abs_increment(x(1), d(1)));
      return slack >= 0.0 ? 0.0 : kInf;
    }
    case ProxKind::group_l2: {
      double s = 0.0;
      for (const auto& b : spec.blocks) s += norm_increment(take(x, b), take(d, b));
      return spec.weight * s;
    }
    case ProxKind::polyhedral_support: {
      for (const auto& r : spec.rays)
        if (r.dot(y) > 0.0) return kInf;
      double m0 = -kInf;
      for (const auto& v : spec.vertices) m0 = std::max(m0, v.dot(x));
      // Gaps at rounding level belong to the exposed face; left as is they
      // swamp t^2 in second-order quotients.
      double vmax = 0.0;
      for (const auto& v : spec.vertices) vmax = std::max(vmax, v.norm());
      const double snap = 1e-12 * (1.0 + vmax * x.norm());
      double best = -kInf;
      for (const auto& v : spec.vertices) {
        double gap = v.dot(x) - m0;
        if (gap > -snap) gap = 0.0;
        best = std::max(best, gap + v.dot(d));
      }
      return best;
    }
    case ProxKind::support_arc_segment: {
      auto disk_piece = [](const Vector& p) {
        return p(1) + (p(0) >= 0.0 ? std::hypot(p(0), p(1)) : std::abs(p(1)));
      };
      const double a0 = std::abs(x(2));
      const double b0 = disk_piece(x);
      const double a1 = std::abs(y(2));
      const double b1 = disk_piece(y);
      if (b0 >= a0 && b1 >= a1) {
        double g;
        if (x(0) >= 0.0 && y(0) >= 0.0) {
          g = norm_increment(x.head<2>(), d.head<2>());
        } else if (x(0) < 0.0 && y(0) < 0.0) {
          g = abs_increment(x(1), d(1));
        } else {
          return b1 - b0;
        }
        return d(1) + g;
      }
      if (a0 > b0 && a1 > b1) return abs_increment(x(2), d(2));
      return std::max(a1, b1) - std::max(a0, b0);
    }
    case ProxKind::support_sharp_cusp: {
      if (x(1) < 0.0 && y(1) < 0.0) {
        const double a = std::abs(x(0));
        const double a1 = std::abs(y(0));
        const double da = abs_increment(x(0), d(0));
        const double b = x(1);
        const double b1 = y(1);
        // a1^3/b1^2 - a^3/b^2 over a common denominator.
        const double num = b * b * da * (a1 * a1 + a1 * a + a * a) - a * a * a * d(1) * (b1 + b);
        return num / (3.0 * b * b * b1 * b1);
      }
      return phi_value(spec, y) - phi_value(spec, x);
    }
  }
  return kInf;
}

Vector prox_eval(const ProxSpec& spec, double tau, const Vector& z) {
  require_tau(tau);
  require_same_dim(z.size(), spec.n, "prox_eval");
  switch (spec.kind) {
    case ProxKind::zero: return z;
    case ProxKind::l1: {
      const double t = tau * spec.weight;
      Vector x(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i)
        x(i) = std::copysign(std::max(std::abs(z(i)) - t, 0.0), z(i));
      return x;
    }
    case ProxKind::indicator_orthant: return z.cwiseMax(0.0);
    case ProxKind::indicator_abs_cone: {
      const double z1 = z(0);
      const double z2 = z(1);
      if (z1 >= std::abs(z2)) return z;
      if (z1 <= -std::abs(z2)) return Vector::Zero(2);
      const double c = 0.5 * (z1 + std::abs(z2));
      Vector x(2);
      x << c, std::copysign(c, z2);
      return x;
    }
    case ProxKind::group_l2: {
      const double t = tau * spec.weight;
      Vector x = Vector::Zero(z.size());
      for (const auto& b : spec.blocks) {
        const Vector zb = take(z, b);
        const double r = zb.norm();
        if (r <= t) continue;
        for (std::size_t i = 0; i < b.size(); ++i) x(b[i]) = (1.0 - t / r) * zb(static_cast<Eigen::Index>(i));
      }
      return x;
    }
    case ProxKind::polyhedral_support: return z - tau * spec.set->project(z / tau);
    case ProxKind::support_arc_segment: return z - tau * project_arc_set(z / tau);
    case ProxKind::support_sharp_cusp: {
      const Vector c = z / tau;
      if (c(1) >= cusp_boundary(c(0))) return Vector::Zero(2);
      return z - tau * project_cusp_set(c);
    }
  }
  return z;
}

BdProxSet bd_prox_set(const ProxSpec& spec, double tau, const Vector& z) {
  require_tau(tau);
  require_same_dim(z.size(), spec.n, "bd_prox_set");
  const Eigen::Index n = spec.n;
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  const double kink = 1e-12 * scale;
  BdProxSet out;
  switch (spec.kind) {
    case ProxKind::zero:
      out.elements.push_back(SymMatrix::identity(n));
      return out;
    case ProxKind::l1:
    case ProxKind::indicator_orthant: {
      const double t = spec.kind == ProxKind::l1 ? tau * spec.weight : 0.0;
      std::vector<Factor> factors;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = spec.kind == ProxKind::l1 ? std::abs(z(i)) : z(i);
        Factor f{{i}, {}};
        if (m > t + kink) {
          f.options = {scalar(1.0)};
        } else if (m < t - kink) {
          f.options = {scalar(0.0)};
        } else {
          f.options = {scalar(1.0), scalar(0.0)};
        }
        factors.push_back(std::move(f));
      }
      out.elements = product_of_factors(n, factors);
      return out;
    }
    case ProxKind::indicator_abs_cone: {
      // K is the orthant in the coordinates a = z1 + z2, b = z1 - z2.
      Matrix pa(2, 2);
      pa << 0.5, 0.5, 0.5, 0.5;
      Matrix pb(2, 2);
      pb << 0.5, -0.5, -0.5, 0.5;
      auto options = [&](double c) -> std::vector<double> {
        if (c > kink) return {1.0};
        if (c < -kink) return {0.0};
        return {1.0, 0.0};
      };
      for (double da : options(z(0) + z(1)))
        for (double db : options(z(0) - z(1))) out.elements.emplace_back(Matrix(da * pa + db * pb));
      return out;
    }
    case ProxKind::group_l2: {
      const double t = tau * spec.weight;
      std::vector<Factor> factors;
      for (const auto& b : spec.blocks) {
        const Vector zb = take(z, b);
        const double r = zb.norm();
        const auto k = static_cast<Eigen::Index>(b.size());
        Factor f{b, {}};
        if (r > t + kink) {
          const Vector u = zb / r;
          f.options = {Matrix((1.0 - t / r) * Matrix::Identity(k, k) + (t / r) * u * u.transpose())};
        } else if (r < t - kink) {
          f.options = {Matrix::Zero(k, k)};
        } else {
          const Vector u = zb / r;
          f.options = {Matrix(u * u.transpose()), Matrix::Zero(k, k)};
        }
        factors.push_back(std::move(f));
      }
      out.elements = product_of_factors(n, factors);
      return out;
    }
    case ProxKind::polyhedral_support: {
      for (const Matrix& dc : projection_jacobians(*spec.set, z / tau))
        out.elements.emplace_back(Matrix(Matrix::Identity(n, n) - dc));
      return out;
    }
    case ProxKind::support_arc_segment:
    case ProxKind::support_sharp_cusp: {
      const bool arc = spec.kind == ProxKind::support_arc_segment;
      const Vector x = prox_eval(spec, tau, z);
      if (z.norm() <= 1e-14) {
        // Limit along the example sequence, plus the interior branch.
        const Matrix limit = arc ? Matrix(Vector(Eigen::Vector3d(0.0, 1.0, 1.0)).asDiagonal())
                                 : Matrix(Matrix::Identity(2, 2));
        out.elements = {SymMatrix(limit), SymMatrix::zero(n)};
        out.exhaustive = false;
        return out;
      }
      const Vector c = z / tau;
      const bool interior = arc ? arc_strict_interior(c, 1e-9) : c(1) > cusp_boundary(c(0)) + 1e-9;
      if (interior) {
        out.elements = {SymMatrix::zero(n)};
        return out;
      }
      // On the arc ridge the projection uses alpha > 0 and phi is not C2 at x.
      const bool ridge = arc && (z(2) - x(2)) != 0.0;
      if (!ridge && in_smooth_region(spec, x)) {
        const Matrix m = Matrix::Identity(n, n) + tau * smooth_hessian(spec, x).mat();
        out.elements = {SymMatrix(Matrix(m.inverse()))};
        return out;
      }
      throw EnumerationUnavailable("bd_prox_set: no Jacobian enumeration for " + kind_name(spec.kind) +
                                   " at this point");
    }
  }
  return out;
}

bool subgradient_contains(const ProxSpec& spec, const Vector& x, const Vector& v, double tol) {
  require_same_dim(x.size(), spec.n, "subgradient_contains");
  require_same_dim(v.size(), spec.n, "subgradient_contains");
  return (x - prox_eval(spec, 1.0, x + v)).norm() <= tol;
}

// ---------------------------------------------------------------------------

bool in_smooth_region(const ProxSpec& spec, const Vector& x) {
  require_same_dim(x.size(), spec.n, "in_smooth_region");
  switch (spec.kind) {
    case ProxKind::support_arc_segment: {
      if (!(x(0) > 0.0)) return false;
      const double n = std::hypot(x(0), x(1));
      return x(1) + n > std::abs(x(2));
    }
    case ProxKind::support_sharp_cusp: return x(1) < 0.0;
    default: return false;
  }
}

Vector smooth_gradient(const ProxSpec& spec, const Vector& x) {
  if (!in_smooth_region(spec, x)) throw EnumerationUnavailable("smooth_gradient: point outside the C2 region");
  if (spec.kind == ProxKind::support_arc_segment) {
    const double n = std::hypot(x(0), x(1));
    Vector g(3);
    g << x(0) / n, x(1) / n + 1.0, 0.0;
    return g;
  }
  const double a = std::abs(x(0));
  const double b = x(1);
  Vector g(2);
  g << x(0) * a / (b * b), -2.0 * a * a * a / (3.0 * b * b * b);
  return g;
}

SymMatrix smooth_hessian(const ProxSpec& spec, const Vector& x) {
  if (!in_smooth_region(spec, x)) throw EnumerationUnavailable("smooth_hessian: point outside the C2 region");
  return spec.kind == ProxKind::support_arc_segment ? arc_hessian(x) : cusp_hessian(x);
}

SequencePoint example_sequence(const ProxSpec& spec, int k) {
  if (k < 2) throw PreconditionError("example_sequence: k must be at least 2");
  const double kk = k;
  Vector x;
  if (spec.kind == ProxKind::support_arc_segment) {
    x = Vector(3);
    x << 1.0 / (kk * kk), -std::sqrt(1.0 - 1.0 / (kk * kk)) / kk, 0.0;
  } else if (spec.kind == ProxKind::support_sharp_cusp) {
    x = Vector(2);
    x << 1.0 / (kk * kk * kk), -1.0 / kk;
  } else {
    throw UnsupportedKind("example_sequence: only the arc and cusp examples carry a sequence");
  }
  return {x, smooth_gradient(spec, x), smooth_hessian(spec, x)};
}

SecondOrderDescriptor second_order_descriptor(const ProxSpec& spec, const Vector& x_bar,
                                              const Vector& v_bar) {
  require_same_dim(x_bar.size(), spec.n, "second_order_descriptor");
  require_same_dim(v_bar.size(), spec.n, "second_order_descriptor");
  if (!subgradient_contains(spec, x_bar, v_bar, 1e-8)) {
    throw PreconditionError("second_order_descriptor: v_bar is not a subgradient at x_bar");
  }
  const Eigen::Index n = spec.n;
  constexpr double tol = 1e-9;

  SecondOrderDescriptor d;
  d.q = SymMatrix::zero(n);
  if (spec.kind != ProxKind::zero) d.lambda_bar = v_bar;

  auto unit = [n](Eigen::Index i, double sign) {
    Vector e = Vector::Zero(n);
    e(i) = sign;
    return e;
  };
  auto finish = [&](const std::vector<Vector>& gens, const std::vector<Vector>& free) {
    const Subspace lin = free.empty() ? Subspace::trivial(n) : orthonormalize(std::span<const Vector>(free));
    d.s_cone = PolyhedralCone::from_generators(n, gens, &lin);
    d.aff_s = d.s_cone.span();
  };

  switch (spec.kind) {
    case ProxKind::zero:
      d.s_cone = PolyhedralCone::whole(n);
      d.aff_s = Subspace::full(n);
      return d;
    case ProxKind::l1: {
      std::vector<Vector> gens;
      std::vector<Vector> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(x_bar(i)) > tol) {
          free.push_back(unit(i, 1.0));
        } else if (v_bar(i) >= spec.weight - tol) {
          gens.push_back(unit(i, 1.0));
        } else if (v_bar(i) <= -spec.weight + tol) {
          gens.push_back(unit(i, -1.0));
        }
      }
      finish(gens, free);
      return d;
    }
    case ProxKind::indicator_orthant: {
      std::vector<Vector> gens;
      std::vector<Vector> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (x_bar(i) > tol) {
          free.push_back(unit(i, 1.0));
        } else if (v_bar(i) >= -tol) {
          gens.push_back(unit(i, 1.0));
        }
      }
      finish(gens, free);
      return d;
    }
    case ProxKind::group_l2: {
      std::vector<Vector> gens;
      std::vector<Vector> free;
      Matrix q = Matrix::Zero(n, n);
      for (const auto& b : spec.blocks) {
        const Vector xb = take(x_bar, b);
        const Vector vb = take(v_bar, b);
        const auto k = static_cast<Eigen::Index>(b.size());
        const double r = xb.norm();
        if (r > tol) {
          const Vector u = xb / r;
          const Matrix qb = (spec.weight / r) * (Matrix::Identity(k, k) - u * u.transpose());
          for (Eigen::Index a = 0; a < k; ++a) {
            free.push_back(unit(b[static_cast<std::size_t>(a)], 1.0));
            for (Eigen::Index c = 0; c < k; ++c)
              q(b[static_cast<std::size_t>(a)], b[static_cast<std::size_t>(c)]) = qb(a, c);
          }
        } else if (vb.norm() >= spec.weight - tol) {
          Vector g = Vector::Zero(n);
          const Vector u = vb.normalized();
          for (Eigen::Index a = 0; a < k; ++a) g(b[static_cast<std::size_t>(a)]) = u(a);
          gens.push_back(g);
        }
      }
      d.q = SymMatrix(q);
      finish(gens, free);
      return d;
    }
    case ProxKind::indicator_abs_cone: {
      // Critical cone T_K(x_bar) intersected with v_bar's orthogonal complement.
      const auto act = spec.set->active_set(x_bar, tol);
      Matrix g(static_cast<Eigen::Index>(act.size()) + 2, n);
      Eigen::Index r = 0;
      for (auto i : act) g.row(r++) = spec.set->a().row(i);
      if (v_bar.norm() > 0.0) {
        g.row(r++) = v_bar.transpose();
        g.row(r++) = -v_bar.transpose();
      }
      d.s_cone = PolyhedralCone::from_inequalities(Matrix(g.topRows(r)), n);
      d.aff_s = d.s_cone.span();
      return d;
    }
    case ProxKind::polyhedral_support: {
      // N_Theta(v_bar) for the face Theta of C exposed by x_bar.
      std::vector<Vector> gens;
      for (auto i : spec.set->active_set(v_bar, tol)) gens.emplace_back(spec.set->a().row(i).transpose());
      std::vector<Vector> free;
      if (x_bar.norm() > 0.0) free.push_back(x_bar);
      finish(gens, free);
      return d;
    }
    case ProxKind::support_arc_segment:
    case ProxKind::support_sharp_cusp: {
      if (x_bar.norm() <= 1e-12 && v_bar.norm() <= 1e-12) {
        std::vector<Vector> gens;
        if (spec.kind == ProxKind::support_sharp_cusp) {
          gens.push_back(unit(1, -1.0));
        } else {
          gens.push_back(unit(0, -1.0));
          gens.push_back(unit(1, -1.0));
        }
        finish(gens, {});
        return d;
      }
      if (in_smooth_region(spec, x_bar)) {
        d.q = smooth_hessian(spec, x_bar);
        d.s_cone = PolyhedralCone::whole(n);
        d.aff_s = Subspace::full(n);
        return d;
      }
      throw EnumerationUnavailable("second_order_descriptor: no descriptor for " + kind_name(spec.kind) +
                                   " at this point");
    }
  }
  return d;
}

}  // namespace ssn
