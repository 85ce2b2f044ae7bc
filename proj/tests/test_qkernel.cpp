#include <doctest.h>

#include <cmath>
#include <random>

#include "qgreen/qkernel.hpp"

using namespace qgreen;

TEST_CASE("QParams rejects bad parameters") {
  CHECK_THROWS_AS(QParams(0.0), DomainError);
  CHECK_THROWS_AS(QParams(1.0), DomainError);
  CHECK_THROWS_AS(QParams(-0.2), DomainError);
  CHECK_THROWS_AS(QParams(0.5, -1e-10), DomainError);
  CHECK_THROWS_AS(QParams(0.5, 1e-14, 0), DomainError);
}

TEST_CASE("QLattice nodes are strictly decreasing with 0 appended") {
  QLattice lat(1.0 / 3.0, 1e-12);
  CHECK(lat.nodes.front() == 1.0);
  CHECK(lat.nodes.back() == 0.0);
  CHECK(lat.nodes[lat.depth] < 1e-12);
  for (int i = 0; i + 1 < lat.size(); ++i) CHECK(lat.nodes[i] > lat.nodes[i + 1]);
  CHECK_THROWS_AS(QLattice(0.999, 1e-12, 200), DomainError);
}

TEST_CASE("q_bracket basics") {
  const QParams p(1.0 / 3.0);
  CHECK(q_bracket(1.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q_bracket(2.0, p) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(q_bracket(0.0, p) == doctest::Approx(0.0));
}

TEST_CASE("q_pochhammer finite values") {
  const QParams p(0.5);
  CHECK(q_pochhammer(0.37, p, 0) == 1.0);
  CHECK(q_pochhammer(1.0, p, 1) == doctest::Approx(0.0));
  CHECK(q_pochhammer(0.5, p, 2) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("q_pochhammer_inf truncation errors surface") {
  const QParams tight(0.5, 1e-14, 3);
  CHECK_THROWS_AS(q_pochhammer_inf(0.9, tight), TruncationNotConverged);
  const QParams p(0.5);
  // (a;q)_inf equals (a;q)_k (a q^k;q)_inf
  const double whole = q_pochhammer_inf(0.8, p);
  const double split = q_pochhammer(0.8, p, 5) * q_pochhammer_inf(0.8 * std::pow(0.5, 5), p);
  CHECK(whole == doctest::Approx(split).epsilon(1e-13));
}

TEST_CASE("q_power_int") {
  const QParams p(0.5);
  CHECK(q_power_int(2.7, -1.1, 0, p) == 1.0);
  CHECK(q_power_int(1.0, 0.0, 7, p) == 1.0);
  CHECK(q_power_int(2.0, 1.0, 2, p) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("q_power_frac special values and cross-checks") {
  const QParams p(0.5);
  CHECK(q_power_frac(1.0, 0.0, 1.5, p) == doctest::Approx(1.0));
  CHECK(q_power_frac(1.0, 1.0, 1.5, p) == 0.0);
  CHECK(q_power_frac(1.0, 1.0, 0.0, p) == 1.0);
  CHECK(q_power_frac(0.0, 0.0, 2.0, p) == 0.0);
  // alpha = 2 agrees with the finite product
  CHECK(q_power_frac(1.0, 0.25, 2.0, p) ==
        doctest::Approx(q_power_int(1.0, 0.25, 2, p)).epsilon(1e-13));
  CHECK(q_power_int(1.0, 0.25, 2, p) == doctest::Approx(21.0 / 32.0).epsilon(1e-15));
  CHECK_THROWS_AS(q_power_frac(0.5, 0.7, 1.0, p), DomainError);
  CHECK_THROWS_AS(q_power_frac(-0.1, -0.2, 1.0, p), DomainError);
}

TEST_CASE("q_power_frac agrees with q_power_int at integer order") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> adist(0.05, 1.0);
  std::uniform_real_distribution<double> rdist(0.0, 1.0);
  for (double q : {0.2, 0.5, 0.9}) {
    const QParams p(q);
    for (int ell = 0; ell <= 3; ++ell) {
      for (int i = 0; i < 25; ++i) {
        const double a = adist(rng);
        const double b = a * rdist(rng);
        const double vi = q_power_int(a, b, ell, p);
        const double vf = q_power_frac(a, b, ell, p);
        CHECK(vf == doctest::Approx(vi).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("q_power_gap matches q_power_frac on lattice gaps") {
  const QParams p(1.0 / 3.0);
  for (double order : {2.5, 1.5, -0.5, -1.5}) {
    for (int d = 1; d <= 6; ++d) {
      const double a = 0.7;
      const double b = a * std::pow(p.q, d);
      const double via_gap = std::pow(a, order) * q_power_gap(order, d, p);
      CHECK(via_gap == doctest::Approx(q_power_frac(a, b, order, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("q_gamma values and poles") {
  const QParams p(0.5);
  CHECK(q_gamma(1.0, p) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q_gamma(2.0, p) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q_gamma(3.0, p) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK_THROWS_AS(q_gamma(0.0, p), DomainError);
  CHECK_THROWS_AS(q_gamma(-2.0, p), DomainError);
}

TEST_CASE("q_gamma recurrence property") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> xdist(0.1, 8.0);
  for (double q : {0.2, 0.5, 0.9}) {
    const QParams p(q, 1e-14, 100000);
    for (int i = 0; i < 50; ++i) {
      double x = xdist(rng);
      if (std::abs(x - std::round(x)) < 1e-3) x += 0.01;
      const double lhs = q_gamma(x + 1.0, p);
      const double rhs = q_bracket(x, p) * q_gamma(x, p);
      CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-10);
    }
  }
}

TEST_CASE("jackson_integral oracle values") {
  SUBCASE("constant integrand") {
    const QParams p(0.41);
    CHECK(jackson_integral([](double) { return 1.0; }, 1.0, p) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("linear integrand gives 1/[2]_q") {
    for (double q : {0.3, 0.5, 0.77}) {
      const QParams p(q);
      CHECK(jackson_integral([](double t) { return t; }, 1.0, p) ==
            doctest::Approx(1.0 / (1.0 + q)).epsilon(1e-13));
    }
  }
  SUBCASE("logarithmic singularity: closed-form arithmetic-geometric sum") {
    // (1-q) ln(1/q) sum k q^k = q ln(1/q)/(1-q); at q = 1/3 this is ln(3)/2.
    const QParams p(1.0 / 3.0);
    const double got = jackson_integral([](double t) { return std::log(1.0 / t); }, 1.0, p);
    CHECK(got == doctest::Approx(std::log(3.0) / 2.0).epsilon(1e-13));
  }
}

TEST_CASE("jackson_integral linearity and positivity") {
  const QParams p(0.6);
  auto f = [](double t) { return 1.0 + t * t; };
  auto g = [](double t) { return std::exp(-t); };
  auto combo = [&](double t) { return 2.5 * f(t) - 0.75 * g(t); };
  const double lhs = jackson_integral(combo, 0.8, p);
  const double rhs =
      2.5 * jackson_integral(f, 0.8, p) - 0.75 * jackson_integral(g, 0.8, p);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(jackson_integral(f, 1.0, p) > 0.0);
}

TEST_CASE("jackson_integral classical limit toward the Riemann integral") {
  auto f = [](double t) { return std::exp(t); };
  const double exact = std::exp(1.0) - 1.0;
  double prev = 1e300;
  for (double q : {0.9, 0.99, 0.999}) {
    const QParams p(q, 1e-12, 2000000);
    const double err = std::abs(jackson_integral(f, 1.0, p) - exact);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("q_derivative") {
  const QParams p(0.5);
  CHECK(q_derivative([](double) { return 3.7; }, 0.3, p) == doctest::Approx(0.0));
  for (double t : {0.25, 0.5, 1.0})
    CHECK(q_derivative([](double s) { return s * s; }, t, p) ==
          doctest::Approx((1.0 + p.q) * t).epsilon(1e-13));
  CHECK(q_derivative([](double s) { return s * s * s; }, 1.0, p) ==
        doctest::Approx(1.75).epsilon(1e-14));
  CHECK_THROWS_AS(q_derivative([](double s) { return s; }, 0.0, p), DomainError);
}

TEST_CASE("q_derivative inverts the Jackson integral on polynomials") {
  for (double q : {0.35, 0.6}) {
    const QParams p(q);
    auto f = [](double t) { return 2.0 + t - 3.0 * t * t + t * t * t; };
    auto F = [&](double t) { return t == 0.0 ? 0.0 : jackson_integral(f, t, p); };
    for (int k = 0; k < 10; ++k) {
      const double t = std::pow(q, k);
      CHECK(std::abs(q_derivative(F, t, p) - f(t)) < 1e-10);
    }
  }
}

TEST_CASE("q_derivative_n difference table") {
  const QParams p(0.45);
  // D^2 t^2 = [2]_q [1]_q is constant
  auto f = [](double s) { return s * s; };
  const double want = (1.0 + p.q);
  CHECK(q_derivative_n(f, 2, 0.8, p) == doctest::Approx(want).epsilon(1e-12));
  CHECK(q_derivative_n(f, 3, 0.8, p) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(q_derivative_n(f, 0, 0.8, p) == doctest::Approx(f(0.8)));
}
