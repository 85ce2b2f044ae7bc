#include "qgreen/qkernel.hpp"

#include <cmath>
#include <string>

namespace qgreen {

QParams::QParams(double q_, double trunc_tol_, int max_terms_)
    : q(q_), trunc_tol(trunc_tol_), max_terms(max_terms_) {
  if (!(q > 0.0) || !(q < 1.0))
    throw DomainError("QParams: q must lie strictly inside (0,1), got " + std::to_string(q));
  if (!(trunc_tol > 0.0)) throw DomainError("QParams: trunc_tol must be > 0");
  if (max_terms < 1) throw DomainError("QParams: max_terms must be >= 1");
}

QLattice::QLattice(double q_, double resolution, int cap) : q(q_) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("QLattice: q must lie in (0,1)");
  if (!(resolution > 0.0)) throw DomainError("QLattice: resolution must be > 0");
  int k = 0;
  double node = 1.0;
  nodes.push_back(node);
  while (node >= resolution) {
    if (k >= cap)
      throw DomainError("QLattice: depth cap " + std::to_string(cap) +
                        " reached before q^K < resolution; loosen the resolution bound");
    ++k;
    node = std::pow(q, k);
    nodes.push_back(node);
  }
  depth = k;
  nodes.push_back(0.0);
}

double q_bracket(double a, const QParams& p) {
  return (1.0 - std::pow(p.q, a)) / (1.0 - p.q);
}

double q_pochhammer(double a, const QParams& p, int ell) {
  if (ell < 0) throw DomainError("q_pochhammer: ell must be >= 0");
  double prod = 1.0;
  double qj = 1.0;
  for (int j = 0; j < ell; ++j) {
    prod *= (1.0 - a * qj);
    qj *= p.q;
  }
  return prod;
}

double q_pochhammer_inf(double a, const QParams& p) {
  double prod = 1.0;
  double aqj = a;
  for (int j = 0; j < p.max_terms; ++j) {
    if (std::abs(aqj) < p.trunc_tol) return prod;
    prod *= (1.0 - aqj);
    aqj *= p.q;
  }
  throw TruncationNotConverged("q_pochhammer_inf: cap " + std::to_string(p.max_terms) +
                               " reached with |a q^j| = " + std::to_string(std::abs(aqj)));
}

double q_factorial(int n, const QParams& p) {
  if (n < 0) throw DomainError("q_factorial: n must be >= 0");
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= q_bracket(static_cast<double>(i), p);
  return prod;
}

double q_power_int(double a, double b, int ell, const QParams& p) {
  if (ell < 0) throw DomainError("q_power_int: ell must be >= 0");
  double prod = 1.0;
  double qj = 1.0;
  for (int j = 0; j < ell; ++j) {
    prod *= (a - b * qj);
    qj *= p.q;
  }
  return prod;
}

double q_power_frac(double a, double b, double alpha, const QParams& p) {
  if (a < 0.0 || b < 0.0) throw DomainError("q_power_frac: requires a, b >= 0");
  if (b > a) throw DomainError("q_power_frac: requires b <= a");
  if (a == 0.0) {
    if (alpha > 0.0) return 0.0;
    if (alpha == 0.0) return 1.0;
    throw DomainError("q_power_frac: 0^(alpha) undefined for alpha < 0");
  }
  if (b == 0.0) return std::pow(a, alpha);
  const double ratio = b / a;
  if (ratio >= 1.0) {  // a == b up to rounding
    if (alpha > 0.0) return 0.0;
    if (alpha == 0.0) return 1.0;
    throw DomainError("q_power_frac: (a-a)^(alpha) undefined for alpha < 0");
  }
  const double num = q_pochhammer_inf(ratio, p);
  const double den = q_pochhammer_inf(std::pow(p.q, alpha) * ratio, p);
  if (den == 0.0) throw DomainError("q_power_frac: pole in denominator Pochhammer");
  return std::pow(a, alpha) * num / den;
}

double q_power_gap(double order, int d, const QParams& p) {
  if (d < 1) throw DomainError("q_power_gap: gap d must be >= 1");
  const double qd = std::pow(p.q, d);
  const double num = q_pochhammer_inf(qd, p);
  const double den = q_pochhammer_inf(std::pow(p.q, order) * qd, p);
  if (den == 0.0) throw DomainError("q_power_gap: pole in denominator Pochhammer");
  return num / den;
}

double q_gamma(double x, const QParams& p) {
  const double r = std::round(x);
  if (x < 0.5 && std::abs(x - r) < 1e-12 && r <= 0.0)
    throw DomainError("q_gamma: pole at nonpositive integer x = " + std::to_string(x));
  const double num = q_pochhammer_inf(p.q, p);
  const double den = q_pochhammer_inf(std::pow(p.q, x), p);
  if (den == 0.0) throw DomainError("q_gamma: pole at x = " + std::to_string(x));
  return num / den * std::pow(1.0 - p.q, 1.0 - x);
}

double jackson_integral(const RealFn& f, double t, const QParams& p) {
  if (!(t > 0.0) || t > 1.0) throw DomainError("jackson_integral: t must lie in (0,1]");
  const double w0 = t * (1.0 - p.q);
  // Tail of a geometrically decaying series is bounded by |term| q/(1-q);
  // require two consecutive small terms to guard against integrand zeros.
  const double term_tol = p.trunc_tol * (1.0 - p.q) / p.q;
  double sum = 0.0;
  double qk = 1.0;
  int small_streak = 0;
  for (int k = 0; k < p.max_terms; ++k) {
    const double term = w0 * qk * f(t * qk);
    sum += term;
    if (std::abs(term) <= term_tol) {
      if (++small_streak >= 2) return sum;
    } else {
      small_streak = 0;
    }
    qk *= p.q;
  }
  throw TruncationNotConverged("jackson_integral: term cap reached before tolerance");
}

double q_derivative(const RealFn& f, double t, const QParams& p) {
  if (!(t > 0.0)) throw DomainError("q_derivative: t must be > 0");
  return (f(t) - f(p.q * t)) / ((1.0 - p.q) * t);
}

double q_derivative_n(const RealFn& f, int n, double t, const QParams& p) {
  if (n < 0) throw DomainError("q_derivative_n: n must be >= 0");
  if (!(t > 0.0)) throw DomainError("q_derivative_n: t must be > 0");
  std::vector<double> v(n + 1);
  for (int a = 0; a <= n; ++a) v[a] = f(std::pow(p.q, a) * t);
  // v[a] holds D^lev f(q^a t); one difference level per pass.
  for (int lev = 1; lev <= n; ++lev) {
    for (int a = 0; a + lev <= n; ++a) {
      const double s = std::pow(p.q, a) * t;
      v[a] = (v[a] - v[a + 1]) / ((1.0 - p.q) * s);
    }
  }
  return v[0];
}

}  // namespace qgreen
