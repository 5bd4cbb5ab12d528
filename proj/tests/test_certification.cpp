#include <doctest.h>

#include <cmath>

#include "ssn/certification.hpp"
#include "ssn/errors.hpp"
#include "ssn/scenarios.hpp"
#include "support/instances.hpp"

using namespace ssn;
using namespace ssn::testing;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// sigma for diagonal D and H: min over d_i > 0 of h_i + (1 - d_i) / (tau d_i).
double diagonal_sigma(const Vector& d, const Vector& h, double tau) {
  double s = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) > 0.0) s = std::min(s, h(i) + (1.0 - d(i)) / (tau * d(i)));
  return s;
}

}  // namespace

TEST_SUITE("certification") {
  TEST_CASE("condition and status names") {
    CHECK(condition_name(ConditionId::viii_cd_gj) == "viii_cd_gj");
    CHECK(status_name(VerdictStatus::probe_false) == "probe_false");
  }

  TEST_CASE("SSOSC at the indefinite orthant example fails with the closed-form constant") {
    const auto p = example_4_2_problem();
    const auto desc = second_order_descriptor(p.phi(), Vector::Zero(2), Vector::Zero(2));
    const auto v = check_ssosc(desc, p.hessian(Vector::Zero(2)));
    CHECK(v.status == VerdictStatus::certified_false);
    CHECK(std::abs(*v.sigma - (3.0 - std::sqrt(17.0)) / 2.0) <= 1e-12);
  }

  TEST_CASE("SSOSC is vacuous on a trivial affine hull") {
    // l1 with strict multipliers everywhere and x = 0: S = {0}.
    const auto desc = second_order_descriptor(ProxSpec::l1(2, 1.0), Vector::Zero(2), vec({0.5, -0.5}));
    CHECK(desc.aff_s.is_trivial());
    const auto v = check_ssosc(desc, SymMatrix::diagonal(vec({-5, -5})));
    CHECK(v.status == VerdictStatus::certified_true);
    CHECK(std::isinf(*v.sigma));
  }

  TEST_CASE("Jacobian condition constant against the diagonal closed form") {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 5);
      Vector d(n);
      Vector h(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = uniform(rng, 0.0, 1.0);
        d(i) = r < 0.2 ? 0.0 : (r < 0.4 ? 1.0 : uniform(rng, 0.05, 1.0));
        h(i) = uniform(rng, -2.0, 3.0);
      }
      const double tau = uniform(rng, 0.2, 2.0);
      const double expected = diagonal_sigma(d, h, tau);
      const double got = jacobian_condition_sigma(SymMatrix::diagonal(d), SymMatrix::diagonal(h), tau);
      if (std::isinf(expected)) {
        CHECK(std::isinf(got));
      } else {
        CHECK(std::abs(got - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
        CHECK(jacobian_condition_holds(SymMatrix::diagonal(d), SymMatrix::diagonal(h), tau, expected - 1e-6));
        CHECK_FALSE(jacobian_condition_holds(SymMatrix::diagonal(d), SymMatrix::diagonal(h), tau, expected + 1e-3));
      }
    }
  }

  TEST_CASE("Jacobian condition verdicts at the indefinite orthant example") {
    const auto p = example_4_2_problem();
    const auto st = StationaryTriple::from_x(p, Vector::Zero(2));
    const auto jc = check_jacobian_condition(p, st);
    CHECK(jc.bd.status == VerdictStatus::certified_false);
    CHECK(std::abs(*jc.bd.sigma - (3.0 - std::sqrt(17.0)) / 2.0) <= 1e-8);
    CHECK_FALSE(jc.clarke.holds());
    CHECK_THROWS_AS(check_jacobian_condition(SymMatrix::identity(2), 1.0, BdProxSet{}), PreconditionError);
  }

  TEST_CASE("BD regularity") {
    const auto p = example_4_2_problem();
    const auto ok = bd_regularity(m_nor_set(p, Vector::Zero(2)));
    CHECK(ok.status == VerdictStatus::certified_true);
    std::vector<Matrix> bad = {Matrix::Identity(2, 2), Matrix(vec({1, 0}).asDiagonal())};
    CHECK(bd_regularity(bad).status == VerdictStatus::certified_false);
    CHECK(bd_regularity(bad, false).status == VerdictStatus::certified_false);
    CHECK(bd_regularity({Matrix::Identity(2, 2)}, false).status == VerdictStatus::probe_true);
  }

  TEST_CASE("structural conditions") {
    // Orthant at the origin: both hold.
    const auto p = example_4_2_problem();
    const auto bd = bd_prox_set(p.phi(), 1.0, Vector::Zero(2));
    const auto desc = second_order_descriptor(p.phi(), Vector::Zero(2), Vector::Zero(2));
    CHECK(check_P1(bd, desc, 1.0).status == VerdictStatus::certified_true);
    CHECK(check_P2(desc, bd, 1.0).status == VerdictStatus::certified_true);

    // Arc example: the limiting Jacobian diag(0,1,1) breaks P1.
    const auto arc = second_order_descriptor(ProxSpec::arc_segment(), Vector::Zero(3), Vector::Zero(3));
    BdProxSet lim;
    lim.elements = {SymMatrix::diagonal(vec({0, 1, 1}))};
    lim.exhaustive = false;
    CHECK(check_P1(lim, arc, 1.0).status == VerdictStatus::certified_false);
  }

  TEST_CASE("structural conditions hold for planted l1 and orthant points") {
    Rng rng(72);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 5);
      const auto inst = planted_instance(rng, trial % 2 ? PlantedKind::l1 : PlantedKind::orthant, n,
                                         random_spectrum(rng, n, -1.0, 2.0), uniform(rng, 0.3, 2.0));
      const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
      const auto bd = bd_prox_set(inst.problem.phi(), inst.problem.tau(), st.z_bar);
      const auto desc = second_order_descriptor(inst.problem.phi(), st.x_bar, st.v_bar);
      CHECK(check_P1(bd, desc, inst.problem.tau()).status == VerdictStatus::certified_true);
      CHECK(check_P2(desc, bd, inst.problem.tau()).status == VerdictStatus::certified_true);
    }
  }

  TEST_CASE("smr probe rejects too few pairs and finds the cone constant") {
    const auto p = cone_example_problem();
    SmrOptions o;
    o.pairs = 10;
    CHECK_THROWS_AS(smr_probe(ResidualMapKind::nat, p, Vector::Zero(2), o), PreconditionError);
    o.pairs = 4000;
    o.radius = 0.5;
    const auto v = smr_probe(ResidualMapKind::nat, p, Vector::Zero(2), o);
    CHECK(v.status == VerdictStatus::probe_true);
    CHECK(*v.sigma >= 0.19);
    CHECK(*v.sigma <= 0.3);
  }

  TEST_CASE("perturbation stability precondition") {
    CHECK_THROWS_AS(perturbation_stability(SymMatrix::identity(2), SymMatrix::diagonal(vec({-1, -1})), 1.0, 0.5, 10,
                                           1e-4, 0),
                    PreconditionError);
    CHECK(perturbation_stability(SymMatrix::identity(2), SymMatrix::identity(2), 1.0, 1.0, 50, 1e-4, 0));
  }

  TEST_CASE("cross check at the indefinite orthant example is consistent with a noted divergence") {
    const auto p = example_4_2_problem();
    const auto rep = cross_check(p, StationaryTriple::from_x(p, Vector::Zero(2)));
    REQUIRE(rep.verdicts.size() == 12);
    CHECK(rep.verdicts[0].id == ConditionId::i);
    CHECK(rep.verdicts[11].id == ConditionId::P2);
    CHECK(rep.consensus.consistent);
    CHECK(rep.get(ConditionId::vi_bd).status == VerdictStatus::certified_true);
    CHECK(rep.get(ConditionId::i).status == VerdictStatus::certified_false);
    // det A < 0 < det I puts a singular matrix in the Clarke hull.
    CHECK(rep.get(ConditionId::v_cd).status == VerdictStatus::probe_false);
    CHECK_FALSE(rep.consensus.notes.empty());
    CHECK(rep.problem_hash.size() == 64);
  }

  TEST_CASE("cross check on the cusp example notes the structural failure") {
    const auto p = cusp_problem(-0.1);
    const auto rep = cross_check(p, StationaryTriple::from_x(p, Vector::Zero(2)));
    CHECK(rep.get(ConditionId::i).status == VerdictStatus::certified_true);
    CHECK_FALSE(rep.get(ConditionId::viii_cd_gj).holds());
    CHECK(rep.get(ConditionId::P1).status != VerdictStatus::certified_true);
    CHECK(rep.consensus.consistent);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("Clarke combinations keep the constant certified on the Bouligand set") {
    Rng rng(73);
    int used = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::Index n = uniform_int(rng, 2, 5);
      const double tau = uniform(rng, 0.3, 2.0);
      const auto inst = planted_instance(rng, trial % 2 ? PlantedKind::l1 : PlantedKind::orthant, n,
                                         random_spectrum(rng, n, -1.0, 3.0), tau, 0.5);
      const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
      const auto bd = bd_prox_set(inst.problem.phi(), tau, st.z_bar);
      const auto desc = second_order_descriptor(inst.problem.phi(), st.x_bar, st.v_bar);
      if (check_P1(bd, desc, tau).status != VerdictStatus::certified_true || bd.elements.size() < 2) continue;
      const SymMatrix h = inst.problem.hessian(st.x_bar);
      double sigma = std::numeric_limits<double>::infinity();
      for (const auto& d : bd.elements) sigma = std::min(sigma, jacobian_condition_sigma(d, h, tau));
      if (!std::isfinite(sigma)) continue;
      ++used;
      std::exponential_distribution<double> expo(1.0);
      for (int k = 0; k < 1000; ++k) {
        Matrix comb = Matrix::Zero(n, n);
        double total = 0.0;
        for (const auto& d : bd.elements) {
          const double w = expo(rng);
          comb += w * d.mat();
          total += w;
        }
        CHECK(jacobian_condition_holds(SymMatrix(Matrix(comb / total)), h, tau, sigma - 1e-9));
      }
    }
    CHECK(used >= 10);
  }

  TEST_CASE("smr probe does not lose constant when the radius shrinks") {
    Rng rng(74);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 4);
      const auto inst = planted_instance(rng, PlantedKind::l1, n, random_spectrum(rng, n, 0.3, 3.0), 1.0, 0.3);
      const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
      SmrOptions big;
      big.radius = 1e-2;
      big.seed = 5;
      SmrOptions small = big;
      small.radius = 1e-3;
      const auto a = smr_probe(ResidualMapKind::nor, inst.problem, st.z_bar, big);
      const auto b = smr_probe(ResidualMapKind::nor, inst.problem, st.z_bar, small);
      CHECK(*b.sigma >= *a.sigma * (1.0 - 1e-3));
    }
  }

  TEST_CASE("growth probe at SSOSC-certified lasso solutions") {
    Rng rng(75);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 5);
      const auto inst = planted_instance(rng, PlantedKind::l1, n, random_spectrum(rng, n, 0.3, 3.0), 1.0, 0.2);
      const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
      const auto desc = second_order_descriptor(inst.problem.phi(), st.x_bar, st.v_bar);
      const auto ssosc = check_ssosc(desc, inst.problem.hessian(st.x_bar));
      REQUIRE(ssosc.status == VerdictStatus::certified_true);
      const auto g = growth_probe(inst.problem, st, 10000, 1e-2, static_cast<std::uint64_t>(trial));
      CHECK(g.status == VerdictStatus::probe_true);
      if (std::isfinite(*ssosc.sigma)) CHECK(*g.sigma >= 0.5 * *ssosc.sigma);
    }
  }
}
