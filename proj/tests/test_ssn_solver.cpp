#include <doctest.h>

#include "ssn/certification.hpp"
#include "ssn/errors.hpp"
#include "ssn/scenarios.hpp"
#include "ssn/ssn_solver.hpp"
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

CompositeProblem lasso_2d() {
  return CompositeProblem::quadratic(SymMatrix::identity(2), vec({3, 0.5}), ProxSpec::l1(2, 1.0), 1.0);
}

SolveTrace geometric_trace(const Vector& ref, const Vector& d, int count) {
  SolveTrace t;
  for (int k = 0; k < count; ++k) {
    t.iterates.push_back(ref + std::pow(0.5, k) * d);
    t.residual_norms.push_back(std::pow(0.5, k));
  }
  return t;
}

}  // namespace

TEST_SUITE("ssn_solver") {
  TEST_CASE("option validation") {
    SolverOptions o;
    CHECK_NOTHROW(o.validate());
    o.damping = 1.0;
    CHECK_THROWS_AS(o.validate(), PreconditionError);
    o.damping = 0.5;
    o.tol = 0.0;
    CHECK_THROWS_AS(o.validate(), PreconditionError);
  }

  TEST_CASE("lasso on the normal map matches the brute-force solution") {
    const auto p = lasso_2d();
    const auto t = solve_normal_map(p, vec({10, -4}));
    REQUIRE(t.converged);
    CHECK(t.residual_norms.back() <= 1e-11);
    CHECK((t.iterates.back() - vec({3, 0.5})).norm() <= 1e-10);
    const Vector x = prox_eval(p.phi(), p.tau(), t.iterates.back());
    CHECK((x - vec({2, 0})).norm() <= 1e-10);
    CHECK(natural_residual(p, x).norm() <= 1e-10);
    const auto oracle = sign_enumeration_oracle(p.quadratic_a(), p.quadratic_b(), p.phi());
    REQUIRE(oracle);
    CHECK((*oracle - x).norm() <= 1e-12);
    CHECK(t.iterates.size() == t.residual_norms.size());
    CHECK(t.step_types.size() + 1 == t.iterates.size());
  }

  TEST_CASE("lasso on the natural residual") {
    const auto t = solve_natural_residual(lasso_2d(), vec({5, 5}));
    REQUIRE(t.converged);
    CHECK((t.iterates.back() - vec({2, 0})).norm() <= 1e-10);
  }

  TEST_CASE("phi = 0 with A positive definite takes one Newton step") {
    Rng rng(61);
    const SymMatrix a = random_spectrum(rng, 4, 0.5, 2.0);
    const auto p = CompositeProblem::quadratic(a, gaussian_vector(rng, 4), ProxSpec::zero(4), 1.0);
    for (int k = 0; k < 5; ++k) {
      const auto t = solve_normal_map(p, 10.0 * gaussian_vector(rng, 4));
      CHECK(t.converged);
      CHECK(t.step_types.size() == 1);
      CHECK(t.step_types[0] == StepType::newton);
      const auto tn = solve_natural_residual(p, 10.0 * gaussian_vector(rng, 4));
      CHECK(tn.converged);
      CHECK(tn.step_types.size() == 1);
    }
  }

  TEST_CASE("the indefinite orthant example converges to the origin from nearby") {
    const auto t = solve_normal_map(example_4_2_problem(), vec({1e-3, 2e-3}));
    REQUIRE(t.converged);
    CHECK(t.iterates.back().norm() <= 1e-12);
  }

  TEST_CASE("cone example on the natural residual") {
    const auto t = solve_natural_residual(cone_example_problem(), vec({0.4, 0.1}));
    REQUIRE(t.converged);
    CHECK(t.iterates.back().norm() <= 1e-10);
  }

  TEST_CASE("singular Jacobian without fallback raises a breakdown") {
    const auto p = CompositeProblem::quadratic(SymMatrix::zero(2), vec({1, 1}), ProxSpec::zero(2), 1.0);
    SolverOptions o;
    o.fallback = false;
    try {
      solve_normal_map(p, Vector::Zero(2), o);
      FAIL("expected a breakdown");
    } catch (const NewtonBreakdown& e) {
      CHECK(e.matrix().norm() == 0.0);
    }
    // With the safeguard the run continues and ends unconverged without throwing.
    SolverOptions with;
    with.max_iter = 5;
    const auto t = solve_normal_map(p, Vector::Zero(2), with);
    CHECK_FALSE(t.converged);
    CHECK(t.step_types.back() == StepType::fallback);
  }

  TEST_CASE("iteration limit yields an unconverged trace") {
    SolverOptions o;
    o.max_iter = 0;
    const auto t = solve_normal_map(lasso_2d(), vec({10, -4}), o);
    CHECK_FALSE(t.converged);
    CHECK(t.iterates.size() == 1);
  }

  TEST_CASE("random seeded Jacobian pick still converges") {
    SolverOptions o;
    o.jacobian_pick = JacobianPick::random_seeded;
    o.seed = 9;
    const auto t = solve_normal_map(example_4_2_problem(), vec({1e-3, -2e-3}), o);
    CHECK(t.converged);
  }

  TEST_CASE("rate profile") {
    const Vector ref = vec({1, 2});
    const auto geo = rate_profile(geometric_trace(ref, vec({1, 0}), 6), ref);
    REQUIRE(geo.quotients.size() == 5);
    for (double q : geo.quotients) CHECK(q == doctest::Approx(0.5));
    CHECK_FALSE(geo.superlinear);

    SolveTrace one;
    one.iterates = {vec({3, 3}), ref, ref};
    one.residual_norms = {1, 0, 0};
    const auto hit = rate_profile(one, ref);
    REQUIRE(hit.quotients.size() == 1);
    CHECK(hit.quotients[0] == 0.0);
    CHECK(hit.superlinear);

    SolveTrace fast;
    for (double e : {1e-1, 1e-2, 1e-4, 1e-8, 1e-16}) fast.iterates.push_back(ref + vec({e, 0}));
    fast.residual_norms.assign(5, 0.0);
    const auto f = rate_profile(fast, ref);
    CHECK(f.superlinear);

    SolveTrace single;
    single.iterates = {ref};
    single.residual_norms = {0};
    CHECK_THROWS_AS(rate_profile(single, ref), PreconditionError);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("residual norms never increase with the safeguard on") {
    Rng rng(62);
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 6);
      const auto inst = planted_instance(rng, trial % 2 ? PlantedKind::l1 : PlantedKind::orthant, n,
                                         random_spectrum(rng, n, 0.2, 4.0), uniform(rng, 0.2, 1.5));
      const auto t = solve_normal_map(inst.problem, 5.0 * gaussian_vector(rng, n));
      for (std::size_t k = 0; k + 1 < t.residual_norms.size(); ++k) {
        if (t.step_types[k] == StepType::fallback) continue;
        CHECK(t.residual_norms[k + 1] <= t.residual_norms[k] * (1.0 + 1e-12));
      }
      CHECK(t.converged);
    }
  }

  TEST_CASE("full steps near solutions certified by the Jacobian condition") {
    Rng rng(63);
    int used = 0;
    for (int trial = 0; trial < 80 && used < 30; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 6);
      const auto inst = planted_instance(rng, trial % 2 ? PlantedKind::l1 : PlantedKind::orthant, n,
                                         random_spectrum(rng, n, -0.5, 3.0), 1.0, 0.0);
      const auto st = StationaryTriple::from_x(inst.problem, inst.x_bar);
      const auto jc = check_jacobian_condition(inst.problem, st);
      if (jc.clarke.status != VerdictStatus::certified_true && jc.clarke.status != VerdictStatus::probe_true) continue;
      ++used;
      const Vector z0 = st.z_bar + 1e-3 * uniform(rng, 0.1, 1.0) * random_unit(rng, n);
      const auto t = solve_normal_map(inst.problem, z0);
      REQUIRE(t.converged);
      for (auto s : t.step_types) CHECK(s == StepType::newton);
      if (t.iterates.size() >= 2) CHECK(rate_profile(t, st.z_bar).superlinear);
    }
    CHECK(used >= 10);
  }
}
