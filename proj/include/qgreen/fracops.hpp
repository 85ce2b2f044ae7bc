#ifndef QGREEN_FRACOPS_HPP
#define QGREEN_FRACOPS_HPP

#include <vector>

#include "qgreen/qkernel.hpp"

namespace qgreen {

/// Fractional order alpha together with n, the smallest integer >= alpha.
struct FracOrder {
  double alpha = 0;
  int n = 0;

  static FracOrder of(double alpha);
  bool is_integer() const;
};

// Riemann-Liouville q-integral of order alpha >= 0:
//   (I^0 f)(t) = f(t),
//   (I^alpha f)(t) = (1/Gamma_q(alpha)) int_0^t (t - q tau)^{(alpha-1)} f(tau) d_q tau.
double rl_integral(const RealFn& f, double alpha, double t, const QParams& p);

// Riemann-Liouville q-derivative (D^n I^{n-alpha} f)(t).  The inner integral is
// evaluated first, so the n-fold q-difference acts on a function vanishing at 0
// like t^{n-alpha}; that keeps the stencil differences well conditioned.
double rl_derivative(const RealFn& f, double alpha, double t, const QParams& p);

// q-derivatives of f at 0: (D_q^i f)(0) = [i]_q!/i! * f^(i)(0), with the
// classical derivative estimated by Richardson-extrapolated forward
// differences (exact for polynomials of degree <= i+3).
double q_derivative_at_zero(const RealFn& f, int i, const QParams& p);

// Caputo q-derivative (I^{n-alpha} D^n f)(t), evaluated through the identity
//   (C D^alpha f)(t) = (D^alpha f)(t)
//                      - sum_{i<n} (D_q^i f)(0) t^{i-alpha} / Gamma_q(i+1-alpha),
// which avoids n-fold q-differencing of f at points arbitrarily close to 0.
// Integer alpha falls back to the plain n-fold q-derivative.
double caputo_derivative(const RealFn& f, double alpha, double t, const QParams& p);

// rl_integral(caputo_derivative(f, alpha), alpha, t) - f(t); for smooth f this
// equals minus the truncated q-Taylor part of f at 0.
double taylor_remainder(const RealFn& f, double alpha, double t, const QParams& p);

/// Finite kernel expansion
///   x(t) = a1 t + a0 - (1/Gamma_q(alpha)) sum_k w[k] 1[u_k <= t] (t - u_k)^{(alpha-1)},
/// u_k = q^{k+1}, produced by q-integrating data against a Green kernel.
/// Fractional q-derivatives of x are evaluated by differentiating each kernel
/// term with the exact rule D_q (t-u)^{(beta)} = [beta]_q (t-u)^{(beta-1)},
/// which is exact on lattice points and immune to the rounding amplification
/// that repeated numerical q-differences suffer near 0.
struct QIntegralImage {
  double alpha = 0;       // kernel order: exponent alpha-1 on (t - u_k)
  double a1 = 0, a0 = 0;  // affine part
  std::vector<double> w;  // weight attached to the kink at u_k = q^{k+1}

  double eval(double t, const QParams& p) const;
  double eval_at_exp(int j, const QParams& p) const;  // t = q^j, exact lattice form
  double eval_zero() const { return a0; }

  // D^nder x at t = q^{s_exp}.
  double dqn_at_exp(int nder, int s_exp, const QParams& p) const;

  // Caputo derivative C D^alpha x at t = q^{t_exp}; requires noninteger alpha.
  // The outer q-integral terminates exactly once it passes the deepest kink.
  double caputo_at_exp(int t_exp, const QParams& p) const;
};

}  // namespace qgreen

#endif
