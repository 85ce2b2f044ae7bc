#ifndef QGREEN_QKERNEL_HPP
#define QGREEN_QKERNEL_HPP

#include <functional>
#include <vector>

#include "qgreen/errors.hpp"

namespace qgreen {

using RealFn = std::function<double(double)>;

/// Base parameter q in (0,1) plus the truncation policy used by every
/// infinite product and Jackson sum in the library.
struct QParams {
  double q;
  double trunc_tol;  // absolute tail tolerance
  int max_terms;     // hard cap on terms of any infinite sum/product

  explicit QParams(double q_, double trunc_tol_ = 1e-14, int max_terms_ = 10000);
};

/// The geometric lattice {q^0, q^1, ..., q^K} with the point 0 appended.
/// K is the smallest exponent with q^K < resolution, capped at `cap`.
struct QLattice {
  double q = 0;
  int depth = 0;              // deepest exponent K
  std::vector<double> nodes;  // q^0 .. q^K, then 0

  QLattice() = default;
  QLattice(double q_, double resolution, int cap = 200);

  int size() const { return static_cast<int>(nodes.size()); }
};

// [a]_q = (1 - q^a)/(1 - q)
double q_bracket(double a, const QParams& p);

// (a;q)_ell = prod_{j<ell} (1 - a q^j)
double q_pochhammer(double a, const QParams& p, int ell);

// (a;q)_inf, truncated when the factor deviation |a| q^j drops below trunc_tol
double q_pochhammer_inf(double a, const QParams& p);

// [n]_q! = [1]_q [2]_q ... [n]_q
double q_factorial(int n, const QParams& p);

// (a - b)^{(ell)} = prod_{j<ell} (a - b q^j)
double q_power_int(double a, double b, int ell, const QParams& p);

// Fractional-order q-power (a - b)^{(alpha)} = a^alpha (b/a;q)_inf / (q^alpha b/a;q)_inf.
// Requires 0 <= b <= a.  (a - a)^{(alpha)} is 0 for alpha > 0 and 1 for alpha = 0.
double q_power_frac(double a, double b, double alpha, const QParams& p);

// Lattice-gap form of the fractional q-power:
//   (a - a q^d)^{(order)} = a^order * q_power_gap(order, d)
// with q_power_gap(order, d) = (q^d;q)_inf / (q^{order+d};q)_inf, d >= 1.
double q_power_gap(double order, int d, const QParams& p);

// Gamma_q(x) via the product form (q;q)_inf / (q^x;q)_inf * (1-q)^{1-x}.
double q_gamma(double x, const QParams& p);

// Jackson integral over [0,t]:  t (1-q) sum_k q^k f(t q^k).
double jackson_integral(const RealFn& f, double t, const QParams& p);

// First-order q-derivative  (f(t) - f(qt)) / ((1-q) t),  t > 0.
double q_derivative(const RealFn& f, double t, const QParams& p);

// n-fold q-derivative via the exact difference table on the stencil
// t, qt, ..., q^n t.
double q_derivative_n(const RealFn& f, int n, double t, const QParams& p);

}  // namespace qgreen

#endif
