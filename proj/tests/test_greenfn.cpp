#include <doctest.h>

#include <cmath>

#include "qgreen/verify.hpp"
#include "test_helpers.hpp"

using namespace qgreen;
using qgreen::testing::example_spec;

TEST_CASE("ProblemSpec structural validation") {
  ProblemSpec spec = example_spec(false);
  CHECK_NOTHROW(spec.validate_structure());

  SUBCASE("gamma sum >= 1 rejected with field path") {
    spec.gammas = {0.9, 0.3};
    try {
      spec.validate_structure();
      CHECK(false);
    } catch (const ConfigError& e) {
      CHECK(e.field == "problem.gammas");
    }
  }
  SUBCASE("zetas must increase") {
    spec.zetas = {0.5, 0.5};
    CHECK_THROWS_AS(spec.validate_structure(), ConfigError);
  }
  SUBCASE("alpha <= 2 rejected (n > 2 required)") {
    spec.order = FracOrder::of(1.5);
    CHECK_THROWS_AS(spec.validate_structure(), ConfigError);
  }
}

TEST_CASE("constants of the worked example") {
  SUBCASE("zero measure: rho = 49/12") {
    const GreenConstants gc = compute_constants(example_spec(false));
    CHECK(gc.delta == doctest::Approx(7.0 / 15.0).epsilon(1e-14));
    CHECK(gc.cshift == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gc.sigma == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(gc.B == doctest::Approx(0.0));
    CHECK(gc.rho == doctest::Approx(49.0 / 12.0).epsilon(1e-14));
  }
  SUBCASE("signed density 2t-1: B = 1/6, rho = 43/12") {
    const GreenConstants gc = compute_constants(example_spec(true));
    CHECK(gc.B == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(gc.rho == doctest::Approx(43.0 / 12.0).epsilon(1e-13));
    CHECK(std::abs(gc.rho - 3.5833) < 1e-4);
  }
  SUBCASE("delta <= 0 rejected") {
    ProblemSpec bad = example_spec(false);
    bad.gammas = {0.7, 0.5};  // bypass validate_structure on purpose
    CHECK_THROWS_AS(compute_constants(bad), HypothesisViolation);
  }
}

TEST_CASE("H1 evaluator") {
  const ProblemSpec spec = example_spec(false);
  const GreenEvaluator green(spec);
  const GreenConstants& gc = green.constants();
  const QParams& p = spec.qp;
  const double a = spec.order.alpha;

  SUBCASE("t = 0 takes the upper branch") {
    for (double tau : {0.2, 0.5, 0.9}) {
      const double want = gc.cshift / (2.0 * green.gamma_alpha_m1()) *
                          q_power_frac(1.0, p.q * tau, a - 2.0, p);
      CHECK(green.H1(0.0, tau) == doctest::Approx(want).epsilon(1e-13));
    }
  }
  SUBCASE("branches agree at the kink t = q tau") {
    for (double tau : {0.3, 0.6, 0.95}) {
      const double t = p.q * tau;
      const double upper = (t + gc.cshift) / (2.0 * green.gamma_alpha_m1()) *
                           q_power_frac(1.0, p.q * tau, a - 2.0, p);
      CHECK(green.H1(t, tau) == doctest::Approx(upper).epsilon(1e-13));
    }
  }
  SUBCASE("lower branch as an independent two-term evaluation") {
    const double t = 0.6, tau = 0.3;  // q tau = 0.1 < t
    const double term1 = (t + gc.cshift) / (2.0 * green.gamma_alpha_m1()) *
                         q_power_frac(1.0, p.q * tau, a - 2.0, p);
    const double term2 = q_power_frac(t, p.q * tau, a - 1.0, p) / green.gamma_alpha();
    CHECK(green.H1(t, tau) == doctest::Approx(term1 - term2).epsilon(1e-13));
  }
}

TEST_CASE("H2 evaluator") {
  const ProblemSpec spec = example_spec(false);
  const GreenEvaluator green(spec);
  const GreenConstants& gc = green.constants();
  const QParams& p = spec.qp;
  const double a = spec.order.alpha;

  SUBCASE("all indicators off once q tau exceeds the largest zeta") {
    // q = 1/3 caps u = q tau below 1/3, so shrink the zetas to reach the branch.
    ProblemSpec small = example_spec(false);
    small.zetas = {0.15, 0.25};
    const GreenEvaluator gs(small);
    const double tau = 0.9;
    REQUIRE(small.qp.q * tau > small.zetas.back());
    const double want = (0.4 + gs.constants().cshift) / (2.0 * gs.gamma_alpha_m1()) *
                        q_power_frac(1.0, small.qp.q * tau, a - 2.0, small.qp);
    CHECK(gs.H2(0.4, tau) == doctest::Approx(want).epsilon(1e-13));
  }
  SUBCASE("gamma = 0 reduces to the prefactor term") {
    ProblemSpec nog = example_spec(false);
    nog.gammas = {0.0, 0.0};
    const GreenEvaluator g2(nog);
    const double tau = 0.4, t = 0.7;
    const double want = t / (2.0 * g2.gamma_alpha_m1()) *
                        q_power_frac(1.0, nog.qp.q * tau, a - 2.0, nog.qp);
    CHECK(g2.H2(t, tau) == doctest::Approx(want).epsilon(1e-13));
    CHECK(g2.constants().delta == doctest::Approx(1.0));
  }
  SUBCASE("both subtraction terms active at q tau = 0.3") {
    const double t = 0.5, tau = 0.9;  // q tau = 0.3 <= zeta_1 < zeta_2
    double want = (t + gc.cshift) / (2.0 * green.gamma_alpha_m1()) *
                  q_power_frac(1.0, p.q * tau, a - 2.0, p);
    for (std::size_t i = 0; i < spec.zetas.size(); ++i)
      want -= spec.gammas[i] / (gc.delta * green.gamma_alpha()) *
              q_power_frac(spec.zetas[i], p.q * tau, a - 1.0, p);
    CHECK(green.H2(t, tau) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("H3 evaluator") {
  const ProblemSpec spec = example_spec(false);
  const GreenEvaluator green(spec);
  const GreenConstants& gc = green.constants();
  const QParams& p = spec.qp;
  const double a = spec.order.alpha;

  SUBCASE("q tau above zeta_i drops the subtraction") {
    const double tau = 0.9, zeta = 0.25;  // u = 0.3 >= zeta
    REQUIRE(p.q * tau >= zeta);
    const double want = (0.5 + gc.cshift) / green.gamma_alpha_m1() *
                        q_power_frac(1.0, p.q * tau, a - 2.0, p);
    CHECK(green.H3(0.5, tau, zeta) == doctest::Approx(want).epsilon(1e-13));
  }
  SUBCASE("first branch difference at q tau = 0.1 <= zeta_1") {
    const double t = 0.5, tau = 0.3, zeta = 1.0 / 3.0;
    const double want =
        (t + gc.cshift) / green.gamma_alpha_m1() *
        (q_power_frac(1.0, p.q * tau, a - 2.0, p) - q_power_frac(zeta, p.q * tau, a - 2.0, p));
    CHECK(green.H3(t, tau, zeta) == doctest::Approx(want).epsilon(1e-13));
  }
  SUBCASE("degenerate zeta_i = 1 cancels the bracket") {
    CHECK(green.H3(0.5, 0.3, 1.0) == doctest::Approx(0.0));
  }
}

TEST_CASE("phi evaluator") {
  SUBCASE("zero measure gives phi = 0") {
    const GreenEvaluator green(example_spec(false));
    for (double tau : {0.1, 0.5, 0.9}) CHECK(green.phi(tau) == 0.0);
  }
  SUBCASE("two quadrature orders agree") {
    ProblemSpec s32 = example_spec(true);
    ProblemSpec s64 = example_spec(true);
    s64.quad_order = 64;
    const GreenEvaluator g32(s32), g64(s64);
    for (double tau : {0.25, 0.5, 0.75})
      CHECK(g32.phi(tau) == doctest::Approx(g64.phi(tau)).epsilon(1e-10));
  }
  SUBCASE("Lebesgue density 1 with gamma = beta = 0: symbolic affine part") {
    // With gamma = beta = 0 and dLambda = dt:
    //   phi(tau) = int_0^1 [H1 + H2] dt
    //            = (1-u)^{(a-2)}/(2 Gamma_q(a-1)) * (1 + 2c)  [affine part, c = 0]
    //              - int_u^1 (t-u)^{(a-1)} dt / Gamma_q(a).
    ProblemSpec s = example_spec(true);
    s.gammas = {0.0, 0.0};
    s.betas = {0.0, 0.0};
    s.measure.density = {1.0};
    const GreenEvaluator green(s);
    const QParams& p = s.qp;
    const double a = s.order.alpha;
    for (double tau : {0.3, 0.7}) {
      const double u = p.q * tau;
      const double affine = q_power_frac(1.0, u, a - 2.0, p) / green.gamma_alpha_m1() * 0.5;
      // Singular part by fine trapezoid as an independent route.
      const int nsteps = 20000;
      double sing = 0.0;
      for (int i = 0; i < nsteps; ++i) {
        const double t0 = u + (1.0 - u) * i / nsteps;
        const double t1 = u + (1.0 - u) * (i + 1.0) / nsteps;
        sing += 0.5 * (q_power_frac(t0, u, a - 1.0, p) + q_power_frac(t1, u, a - 1.0, p)) *
                (t1 - t0);
      }
      sing /= green.gamma_alpha();
      CHECK(green.phi(tau) == doctest::Approx(affine - sing).epsilon(1e-6));
    }
  }
}

TEST_CASE("G assembly matches its decomposition") {
  for (bool with_measure : {false, true}) {
    const ProblemSpec spec = example_spec(with_measure);
    const GreenEvaluator green(spec);
    const GreenConstants& gc = green.constants();
    const QParams& p = spec.qp;
    for (double t : {0.0, 0.3, 0.8, 1.0}) {
      for (double tau : {0.15, 0.5, 0.95}) {
        const double u = p.q * tau;
        double want = (t + gc.cshift) * green.Kcoef(tau) + green.Mcoef(tau);
        if (u <= t)
          want -= q_power_frac(t, u, spec.order.alpha - 1.0, p) / green.gamma_alpha();
        CHECK(green.G(t, tau) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("G degenerate composition: mu = beta = gamma = 0") {
  ProblemSpec spec = example_spec(false);
  spec.gammas = {0.0, 0.0};
  spec.betas = {0.0, 0.0};
  spec.mu = 0.0;
  const GreenEvaluator green(spec);
  for (double t : {0.2, 0.7}) {
    for (double tau : {0.3, 0.8}) {
      CHECK(green.G(t, tau) ==
            doctest::Approx(green.H1(t, tau) + green.H2(t, tau)).epsilon(1e-13));
    }
  }
}

TEST_CASE("G term-by-term for the zero-measure example") {
  const ProblemSpec spec = example_spec(false);
  const GreenEvaluator green(spec);
  const GreenConstants& gc = green.constants();
  const double t = 0.45, tau = 0.62;
  double want = green.H1(t, tau) + green.H2(t, tau);
  for (std::size_t i = 0; i < spec.betas.size(); ++i)
    want += spec.betas[i] / gc.rho * green.H3(t, tau, spec.zetas[i]);
  CHECK(green.G(t, tau) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("psi bound functions") {
  SUBCASE("beta = 0, mu = 0: psi2 collapses to the bare kernel") {
    ProblemSpec spec = example_spec(false);
    spec.betas = {0.0, 0.0};
    spec.mu = 0.0;
    const GreenEvaluator green(spec);
    CHECK(green.constants().Phat == doctest::Approx(1.0));
    CHECK(green.constants().Ptilde == doctest::Approx(0.0));
    for (double tau : {0.2, 0.6}) {
      const double want = q_power_frac(1.0, spec.qp.q * tau, spec.order.alpha - 2.0, spec.qp) /
                          green.gamma_alpha_m1();
      CHECK(green.psi2(tau) == doctest::Approx(want).epsilon(1e-13));
    }
  }
  SUBCASE("psi1 <= sigma psi2 at sampled tau (signed-measure case)") {
    const GreenEvaluator green(example_spec(true));
    for (double tau : {0.1, 0.4, 0.8})
      CHECK(green.psi1(tau) <= green.constants().sigma * green.psi2(tau) + 1e-12);
  }
}

TEST_CASE("validate_hypotheses on both example cases") {
  SUBCASE("zero measure passes with rho = 49/12 and B = 0") {
    const HypothesisReport rep = GreenEvaluator(example_spec(false)).validate(101);
    CHECK(rep.pass());
    CHECK(rep.constants.rho == doctest::Approx(49.0 / 12.0));
    CHECK(rep.constants.B == 0.0);
  }
  SUBCASE("signed measure passes with B = 1/6") {
    const HypothesisReport rep = GreenEvaluator(example_spec(true)).validate(101);
    CHECK(rep.pass());
    CHECK(rep.constants.B == doctest::Approx(1.0 / 6.0));
    CHECK(rep.phi_min_sampled > 0.0);
  }
  SUBCASE("rho < 0 is reported as failure") {
    ProblemSpec bad = example_spec(false);
    bad.nu = 0.1;
    bad.mu = 0.0;
    const HypothesisReport rep = GreenEvaluator(bad).validate(11);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.rho_positive);
  }
}

TEST_CASE("kernel positivity and true sandwich bounds on a coarse grid") {
  for (bool with_measure : {false, true}) {
    const GreenEvaluator green(example_spec(with_measure));
    const GreenPropertyReport rep = check_green_properties(green, 40);
    CHECK(rep.min_H1 > -1e-12);
    CHECK(rep.min_H2 > -1e-12);
    CHECK(rep.min_H3 > -1e-12);
    CHECK(rep.margin_i_upper > -1e-12);
    CHECK(rep.margin_ii_lower > -1e-10);
    CHECK(rep.margin_iii_lower > -1e-10);
    CHECK(rep.margin_iii_upper > -1e-10);
    // The t = 1 domination bound (margin_ii_upper) genuinely fails for these
    // kernels: H1+H2 peaks at interior t.  Its failure is asserted in the
    // acceptance suite; here we just record that it is negative.
    CHECK(rep.margin_ii_upper < 0.0);
  }
}
