#include <doctest.h>

#include <cmath>

#include "qgreen/verify.hpp"
#include "test_helpers.hpp"

using namespace qgreen;
using qgreen::testing::example_spec;

TEST_CASE("cone_seed is p(t) = (t + cshift)/sigma") {
  const GreenEvaluator green(example_spec(false));
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  const QGridFunction p = cone_seed(green, tables);
  // worked example: p(t) = (2t+1)/3
  CHECK(p(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(p(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.value0 == doctest::Approx(1.0 / 3.0));
  CHECK(p.values[0] == doctest::Approx(1.0));
  // evaluator agrees with lattice values
  for (int k = 0; k <= p.lattice.depth; ++k)
    CHECK(p(p.lattice.nodes[k]) == doctest::Approx(p.values[k]).epsilon(1e-12));
}

TEST_CASE("cone_seed degenerate gamma = 0 gives p(t) = t") {
  ProblemSpec spec = example_spec(false);
  spec.gammas = {0.0, 0.0};
  const GreenEvaluator green(spec);
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  const QGridFunction p = cone_seed(green, tables);
  CHECK(p(0.25) == doctest::Approx(0.25));
  CHECK(p.value0 == 0.0);
  CHECK(p(1.0) == doctest::Approx(1.0));
}

TEST_CASE("apply_T basic properties") {
  const ProblemSpec spec = example_spec(false);
  const GreenEvaluator green(spec);
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  const QGridFunction p = cone_seed(green, tables);

  SUBCASE("f == 0 maps to the zero function") {
    ProblemSpec zf = spec;
    zf.f = [](double, double) { return 0.0; };
    const GreenEvaluator gz(zf);
    const GreenLatticeTables tz = GreenLatticeTables::build(gz, {});
    const QGridFunction im = apply_T(cone_seed(gz, tz), gz, tz);
    CHECK(im.sup_norm() == doctest::Approx(0.0));
  }

  SUBCASE("monotone in the input: x <= x' implies T x <= T x'") {
    const QGridFunction tx = apply_T(p, green, tables);
    const QGridFunction tx2 = apply_T(p.scaled(2.0), green, tables);
    for (std::size_t k = 0; k < tx.values.size(); ++k)
      CHECK(tx.values[k] <= tx2.values[k] + 1e-14);
    CHECK(tx.value0 <= tx2.value0 + 1e-14);
  }

  SUBCASE("negative input rejected") {
    QGridFunction bad = p.scaled(-1.0);
    CHECK_THROWS_AS(apply_T(bad, green, tables), NegativeInput);
  }

  SUBCASE("evaluator agrees with lattice values") {
    const QGridFunction tx = apply_T(p, green, tables);
    for (int k = 0; k <= tx.lattice.depth; ++k)
      CHECK(tx(tx.lattice.nodes[k]) == doctest::Approx(tx.values[k]).epsilon(1e-12));
    CHECK(tx(0.0) == doctest::Approx(tx.value0).epsilon(1e-12));
  }
}

TEST_CASE("apply_T closed form for constant f against bare kernel") {
  // gamma = beta = 0, mu = 0, f = c, h = 1:
  //   T x(t) = c [ t/Gamma_q(alpha) - t^alpha/Gamma_q(alpha+1) ]
  ProblemSpec spec = example_spec(false);
  spec.gammas = {0.0, 0.0};
  spec.betas = {0.0, 0.0};
  spec.mu = 0.0;
  spec.h = [](double) { return 1.0; };
  const double c = 2.5;
  spec.f = [c](double, double) { return c; };
  const GreenEvaluator green(spec);
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  const QGridFunction im = apply_T(cone_seed(green, tables), green, tables);
  const QParams& p = spec.qp;
  const double a = spec.order.alpha;
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const double want = c * (t / q_gamma(a, p) - std::pow(t, a) / q_gamma(a + 1.0, p));
    CHECK(im(t) == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("solve on the worked example, both measures") {
  for (bool with_measure : {false, true}) {
    CAPTURE(with_measure);
    const GreenEvaluator green(example_spec(with_measure));
    const SolveReport rep = solve(green);
    CHECK(rep.converged);
    CHECK(rep.n_iters < 500);
    CHECK(rep.fixed_point_residual < 1e-8);
    CHECK(rep.mu_hat > 0.0);
    CHECK(rep.mu_hat <= rep.nu_hat);
    CHECK(rep.sup_norm > 0.0);
    REQUIRE(rep.residuals);
    CHECK(rep.residuals->ode_residual_sup < 1e-5);
    CHECK(rep.residuals->bc0_residual < 1e-6);
    CHECK(rep.residuals->bc_mixed_residual < 1e-6);
    for (double r : rep.residuals->bc_der_residuals) CHECK(r < 1e-6);
  }
}

TEST_CASE("iteration error decays monotonically and dominates the r-concave rate") {
  // With y(ell) = ell^{4/9} the error estimate is o(1 - eps^{r^n}) ~ C r^n
  // with r = 4/9; the observed per-step ratios must stay strictly below r.
  const GreenEvaluator green(testing::example_spec(false));
  const SolveReport rep = solve(green);
  REQUIRE(rep.sup_changes.size() >= 4);
  const double r = 4.0 / 9.0;
  for (std::size_t i = 1; i + 1 < rep.sup_changes.size(); ++i) {
    CHECK(rep.sup_changes[i] < rep.sup_changes[i - 1]);
    CHECK(rep.sup_changes[i] / rep.sup_changes[i - 1] < r);
  }
}

TEST_CASE("x-independent f converges in exactly 2 iterations") {
  ProblemSpec spec = example_spec(false);
  spec.f = [](double t, double) { return 1.0 + t; };
  const GreenEvaluator green(spec);
  const SolveReport rep = solve(green);
  CHECK(rep.converged);
  CHECK(rep.n_iters == 2);
  CHECK(rep.sup_changes.back() == doctest::Approx(0.0));
}

TEST_CASE("iteration is monotone once the first step is one-sided") {
  const GreenEvaluator green(example_spec(false));
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  QGridFunction x = cone_seed(green, tables);
  QGridFunction x1 = apply_T(x, green, tables, green.spec().lambda);
  // establish the direction of the first step, then require it to persist
  const bool increasing = x1.values[0] >= x.values[0];
  QGridFunction prev = x1;
  for (int it = 0; it < 8; ++it) {
    QGridFunction next = apply_T(prev, green, tables, green.spec().lambda);
    for (std::size_t k = 0; k < next.values.size(); ++k) {
      if (increasing)
        CHECK(next.values[k] >= prev.values[k] - 1e-12);
      else
        CHECK(next.values[k] <= prev.values[k] + 1e-12);
    }
    prev = std::move(next);
  }
}

TEST_CASE("uniqueness probe: seeds p/2 and 3p reach the same fixed point") {
  const GreenEvaluator green(example_spec(false));
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  const QGridFunction p = cone_seed(green, tables);
  const SolveReport lo = solve(green, {}, p.scaled(0.5));
  const SolveReport hi = solve(green, {}, p.scaled(3.0));
  CHECK(lo.converged);
  CHECK(hi.converged);
  CHECK(sup_diff(lo.solution, hi.solution) < 1e-8);
}

TEST_CASE("solve refuses a failing hypothesis") {
  ProblemSpec bad = example_spec(false);
  bad.nu = 0.5;  // rho < 0
  const GreenEvaluator green(bad);
  CHECK_THROWS_AS(solve(green), HypothesisViolation);
}

TEST_CASE("lambda_sweep ordering and limits") {
  const GreenEvaluator green(example_spec(false));
  SUBCASE("three increasing lambdas are pointwise ordered") {
    const SweepReport sweep = lambda_sweep(green, {0.5, 1.0, 2.0});
    CHECK(sweep.pointwise_ordered);
    CHECK(sweep.norms_increasing);
    CHECK(sweep.reports[0].sup_norm < sweep.reports[1].sup_norm);
    CHECK(sweep.reports[1].sup_norm < sweep.reports[2].sup_norm);
  }
  SUBCASE("small lambda gives a small solution") {
    const SweepReport sweep = lambda_sweep(green, {1e-3, 1.0});
    CHECK(sweep.reports[0].sup_norm < sweep.reports[1].sup_norm / 10.0);
  }
  SUBCASE("single lambda runs without ordering checks") {
    const SweepReport sweep = lambda_sweep(green, {1.0});
    CHECK(sweep.reports.size() == 1);
    CHECK(sweep.pointwise_ordered);
  }
  SUBCASE("non-increasing list rejected") {
    CHECK_THROWS_AS(lambda_sweep(green, {2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(lambda_sweep(green, {-1.0}), ConfigError);
  }
}

TEST_CASE("two-point degenerate problem (no interior points at all)") {
  ProblemSpec spec = testing::example_spec(false);
  spec.gammas.clear();
  spec.betas.clear();
  spec.zetas.clear();
  spec.mu = 0.0;
  const GreenEvaluator green(spec);
  const SolveReport rep = solve(green);
  CHECK(rep.converged);
  CHECK(rep.solution.value0 == doctest::Approx(0.0));  // x(0) = empty gamma sum
  REQUIRE(rep.residuals);
  CHECK(rep.residuals->ode_residual_sup < 1e-5);
  CHECK(rep.residuals->bc_mixed_residual < 1e-6);
}

TEST_CASE("sup_diff requires matching lattices") {
  const GreenEvaluator green(example_spec(false));
  const GreenLatticeTables tables = GreenLatticeTables::build(green, {});
  QGridFunction a = cone_seed(green, tables);
  QGridFunction b = a;
  b.values.pop_back();
  CHECK_THROWS_AS(sup_diff(a, b), DomainError);
}
