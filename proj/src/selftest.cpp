#include "qgreen/selftest.hpp"

#include <cmath>
#include <random>

#include "qgreen/expr.hpp"
#include "qgreen/fracops.hpp"
#include "qgreen/measure.hpp"

namespace qgreen::selftest {

namespace {

CheckResult make(const std::string& name, double worst, double tol, long cases,
                 std::string note = {}) {
  return CheckResult{name, worst < tol, cases, worst, tol, std::move(note)};
}

}  // namespace

CheckResult gamma_recurrence(double trunc_tol) {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> xdist(0.1, 8.0);
  double worst = 0.0;
  long cases = 0;
  for (double q : {0.2, 0.5, 0.9}) {
    const QParams p(q, trunc_tol, 100000);
    for (int i = 0; i < 50; ++i) {
      double x = xdist(rng);
      if (std::abs(x - std::round(x)) < 1e-3) x += 0.01;
      const double lhs = q_gamma(x + 1.0, p);
      const double rhs = q_bracket(x, p) * q_gamma(x, p);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
      ++cases;
    }
  }
  return make("gamma_recurrence", worst, 1e-10, cases);
}

CheckResult qpower_int_frac_agreement(double trunc_tol) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> adist(0.05, 1.0);
  std::uniform_real_distribution<double> rdist(0.0, 1.0);
  double worst = 0.0;
  long cases = 0;
  for (double q : {0.3, 0.5, 0.7}) {
    const QParams p(q, trunc_tol, 100000);
    for (int ell = 0; ell <= 3; ++ell) {
      for (int i = 0; i < 10; ++i) {
        const double a = adist(rng);
        const double b = a * rdist(rng);
        const double vi = q_power_int(a, b, ell, p);
        const double vf = q_power_frac(a, b, static_cast<double>(ell), p);
        const double scale = std::max(1e-30, std::abs(vi));
        worst = std::max(worst, std::abs(vi - vf) / scale);
        ++cases;
      }
    }
  }
  return make("qpower_int_frac_agreement", worst, 1e-10, cases);
}

CheckResult jackson_linearity(double trunc_tol) {
  double worst = 0.0;
  long cases = 0;
  auto f = [](double t) { return 1.0 + 3.0 * t - t * t; };
  auto g = [](double t) { return std::exp(t) - 0.25 * t; };
  for (double q : {0.3, 0.5, 0.8}) {
    const QParams p(q, trunc_tol, 100000);
    for (double t : {0.3, 0.7, 1.0}) {
      for (double a : {-2.0, 0.5}) {
        for (double b : {1.5, -0.25}) {
          auto combo = [&](double s) { return a * f(s) + b * g(s); };
          const double lhs = jackson_integral(combo, t, p);
          const double rhs =
              a * jackson_integral(f, t, p) + b * jackson_integral(g, t, p);
          worst = std::max(worst, std::abs(lhs - rhs));
          ++cases;
        }
      }
    }
  }
  return make("jackson_linearity", worst, 1e-12, cases);
}

CheckResult jackson_positivity(double trunc_tol) {
  double lowest = 0.0;
  long cases = 0;
  auto f = [](double t) { return t * t * (1.1 - t); };
  auto g = [](double t) { return std::log(1.0 / t); };
  for (double q : {0.25, 0.6, 0.9}) {
    const QParams p(q, trunc_tol, 100000);
    for (double t : {0.4, 1.0}) {
      lowest = std::min({lowest, jackson_integral(f, t, p), jackson_integral(g, t, p)});
      cases += 2;
    }
  }
  return make("jackson_positivity", -lowest, 1e-15, cases, "min integral of nonneg f");
}

CheckResult jackson_classical_limit(double trunc_tol) {
  // For smooth f the Jackson integral approaches the Riemann integral as
  // q -> 1; checked as monotone error decay over q in {0.9, 0.99, 0.999}.
  auto f = [](double t) { return std::exp(t); };
  const double exact = std::exp(1.0) - 1.0;
  double prev_err = 1e300;
  long cases = 0;
  double worst = 0.0;
  for (double q : {0.9, 0.99, 0.999}) {
    const QParams p(q, trunc_tol, 2000000);
    const double err = std::abs(jackson_integral(f, 1.0, p) - exact);
    if (err > prev_err) worst = std::max(worst, err - prev_err);
    prev_err = err;
    ++cases;
  }
  return make("jackson_classical_limit", worst, 1e-15, cases, "error must decrease as q->1");
}

CheckResult jackson_inversion(double trunc_tol) {
  // D_q of t -> int_0^t f d_q tau recovers f at lattice points.
  double worst = 0.0;
  long cases = 0;
  auto f = [](double t) { return 2.0 + t - 3.0 * t * t + t * t * t; };
  for (double q : {0.35, 0.6}) {
    const QParams p(q, trunc_tol, 100000);
    auto F = [&](double t) { return t == 0.0 ? 0.0 : jackson_integral(f, t, p); };
    for (int k = 0; k < 8; ++k) {
      const double t = std::pow(q, k);
      worst = std::max(worst, std::abs(q_derivative(F, t, p) - f(t)));
      ++cases;
    }
  }
  return make("jackson_inversion", worst, 1e-10, cases);
}

CheckResult power_rule(double trunc_tol) {
  // I^alpha t^g = Gamma_q(g+1)/Gamma_q(alpha+g+1) t^{alpha+g}
  double worst = 0.0;
  long cases = 0;
  for (double q : {0.3, 0.5, 0.7}) {
    const QParams p(q, trunc_tol, 100000);
    for (double g : {0.0, 1.0, 2.5}) {
      for (double alpha : {0.5, 1.5, 3.5}) {
        ++cases;
        for (double t : {0.25, 0.5, 1.0}) {
          auto f = [g](double s) { return std::pow(s, g); };
          const double got = rl_integral(f, alpha, t, p);
          const double want =
              q_gamma(g + 1.0, p) / q_gamma(alpha + g + 1.0, p) * std::pow(t, alpha + g);
          worst = std::max(worst, std::abs(got - want) / std::abs(want));
        }
      }
    }
  }
  return make("power_rule", worst, 1e-8, cases);
}

CheckResult semigroup(double trunc_tol) {
  // I^a I^b f = I^{a+b} f
  double worst = 0.0;
  long cases = 0;
  for (double q : {0.3, 0.7}) {
    const QParams p(q, trunc_tol, 100000);
    for (double g : {0.0, 1.0, 2.0}) {
      auto f = [g](double s) { return std::pow(s, g); };
      for (double a : {0.5, 1.0, 1.5}) {
        for (double b : {0.5, 1.0, 1.5}) {
          ++cases;
          auto inner = [&](double s) { return s == 0.0 ? 0.0 : rl_integral(f, b, s, p); };
          for (double t : {0.25, 0.5, 1.0}) {
            const double lhs = rl_integral(inner, a, t, p);
            const double rhs = rl_integral(f, a + b, t, p);
            worst = std::max(worst, std::abs(lhs - rhs));
          }
        }
      }
    }
  }
  return make("semigroup", worst, 1e-8, cases);
}

CheckResult rl_inversion(double trunc_tol) {
  // D^alpha I^alpha f = f
  double worst = 0.0;
  long cases = 0;
  for (double q : {0.3, 0.7}) {
    const QParams p(q, trunc_tol, 100000);
    for (double g : {0.0, 1.0, 2.0}) {
      auto f = [g](double s) { return std::pow(s, g); };
      for (double alpha : {0.5, 1.0, 1.5}) {
        ++cases;
        auto integ = [&](double s) { return s == 0.0 ? 0.0 : rl_integral(f, alpha, s, p); };
        for (double t : {0.25, 0.5, 1.0}) {
          const double got = rl_derivative(integ, alpha, t, p);
          worst = std::max(worst, std::abs(got - f(t)));
        }
      }
    }
  }
  return make("rl_inversion", worst, 1e-8, cases);
}

CheckResult caputo_annihilation(double trunc_tol) {
  // C D^alpha t^j = 0 for j < n, on 20 lattice points.  q = 0.9 keeps the
  // points shallow enough that the cancellation stays below 1e-10 in doubles;
  // the product truncation runs two decades tighter than elsewhere because the
  // two canceling pieces grow like t^{j-alpha}.
  double worst = 0.0;
  long cases = 0;
  const QParams p(0.9, trunc_tol / 100.0, 400000);
  for (double alpha : {2.5, 3.5}) {
    const int n = FracOrder::of(alpha).n;
    for (int j = 0; j < n; ++j) {
      auto f = [j](double s) { return std::pow(s, j); };
      for (int k = 0; k < 20; ++k) {
        const double t = std::pow(0.9, k);
        // both canceling evaluations grow like t^{j-alpha}; scale accordingly
        const double scale = std::max(1.0, std::pow(t, j - alpha));
        worst = std::max(worst, std::abs(caputo_derivative(f, alpha, t, p)) / scale);
        ++cases;
      }
    }
  }
  return make("caputo_annihilation", worst, 1e-10, cases);
}

CheckResult measure_exactness() {
  // Gauss-Legendre order 32 integrates degree <= 20 times a cubic density
  // exactly.
  StieltjesMeasure m;
  m.density = {0.5, -2.0, 1.25, 3.0};
  double worst = 0.0;
  long cases = 0;
  for (int deg = 0; deg <= 20; deg += 5) {
    auto g = [deg](double t) { return std::pow(t, deg); };
    double want = 0.0;
    for (std::size_t c = 0; c < m.density.size(); ++c)
      want += m.density[c] / (deg + c + 1.0);
    worst = std::max(worst, std::abs(stieltjes_integrate(g, m) - want));
    ++cases;
  }
  return make("measure_exactness", worst, 1e-12, cases);
}

CheckResult measure_kink_split() {
  StieltjesMeasure m;
  m.density = {1.0};
  double worst = 0.0;
  long cases = 0;
  for (double c : {0.2, 0.5, 0.77}) {
    auto g = [c](double t) { return std::abs(t - c); };
    const double want = 0.5 * (c * c + (1.0 - c) * (1.0 - c));
    worst = std::max(worst, std::abs(stieltjes_integrate(g, m, {c}) - want));
    ++cases;
  }
  return make("measure_kink_split", worst, 1e-12, cases);
}

CheckResult expr_roundtrip() {
  const char* corpus[] = {
      "t^2", "2+3*4", "2^3^2", "-2^2", "(3^(1/3)*t^3 + x^(4/3)*t + 1)^(1/3)",
      "ln(1/t)", "ell^(4/9)", "min(t, 1-t)", "max(abs(-t), sqrt(t))",
      "pow(t, 2.5)/(1+t)", "exp(-t^2)", "t*x - x/t + 1e-3",
  };
  long cases = 0;
  double worst = 0.0;
  for (const char* src : corpus) {
    ExprPtr a = parse(src);
    ExprPtr b = parse(unparse(*a));
    if (!structurally_equal(*a, *b)) worst = 1.0;
    ++cases;
  }
  if (eval(*parse("2+3*4"), {}) != 14.0) worst = 1.0;
  if (eval(*parse("2^3^2"), {}) != 512.0) worst = 1.0;
  if (eval(*parse("-2^2"), {}) != -4.0) worst = 1.0;
  cases += 3;
  return make("expr_roundtrip", worst, 0.5, cases);
}

std::vector<CheckResult> run_all(double trunc_tol) {
  return {
      gamma_recurrence(trunc_tol),
      qpower_int_frac_agreement(trunc_tol),
      jackson_linearity(trunc_tol),
      jackson_positivity(trunc_tol),
      jackson_classical_limit(std::max(trunc_tol, 1e-12)),
      jackson_inversion(trunc_tol),
      power_rule(trunc_tol),
      semigroup(trunc_tol),
      rl_inversion(trunc_tol),
      caputo_annihilation(trunc_tol),
      measure_exactness(),
      measure_kink_split(),
      expr_roundtrip(),
  };
}

}  // namespace qgreen::selftest
