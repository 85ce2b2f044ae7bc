#include "qgreen/fracops.hpp"

#include <cmath>
#include <string>

namespace qgreen {

namespace {

constexpr double kIntegerEps = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) < kIntegerEps; }

}  // namespace

FracOrder FracOrder::of(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("FracOrder: alpha must be > 0");
  int n = near_integer(alpha) ? static_cast<int>(std::llround(alpha))
                              : static_cast<int>(std::ceil(alpha));
  return FracOrder{alpha, n};
}

bool FracOrder::is_integer() const { return near_integer(alpha); }

double rl_integral(const RealFn& f, double alpha, double t, const QParams& p) {
  if (alpha < 0.0) throw DomainError("rl_integral: alpha must be >= 0");
  if (t < 0.0 || t > 1.0) throw DomainError("rl_integral: t must lie in [0,1]");
  if (alpha == 0.0) return f(t);
  if (t == 0.0) return 0.0;
  const double gamma_a = q_gamma(alpha, p);
  auto weighted = [&](double tau) { return q_power_frac(t, p.q * tau, alpha - 1.0, p) * f(tau); };
  return jackson_integral(weighted, t, p) / gamma_a;
}

double rl_derivative(const RealFn& f, double alpha, double t, const QParams& p) {
  if (alpha < 0.0) throw DomainError("rl_derivative: alpha must be >= 0");
  if (!(t > 0.0)) throw DomainError("rl_derivative: t must be > 0");
  if (alpha == 0.0) return f(t);
  const FracOrder ord = FracOrder::of(alpha);
  if (ord.is_integer()) return q_derivative_n(f, ord.n, t, p);
  // D^n I^{n-alpha} f at t, with the n-fold q-derivative applied to each
  // kernel term of the t-anchored Jackson sum through the exact rule
  // D_q (s-u)^{(beta)} = [beta]_q (s-u)^{(beta-1)}.  Repeated numerical
  // q-differencing would amplify rounding noise near 0; this route does not
  // subtract at all.
  const double beta = ord.n - alpha;  // in (0,1)
  double coef = 1.0;
  for (int i = 1; i <= ord.n; ++i) coef *= q_bracket(beta - i, p);
  // The s^{beta-1-n} prefactor rescales the sum, so truncation must be
  // relative to the largest term seen, not absolute.
  double sum = 0.0;
  double qk = 1.0;
  double term_max = 0.0;
  int small_streak = 0;
  bool converged = false;
  for (int k = 0; k < p.max_terms; ++k) {
    const double w = (1.0 - p.q) * qk * t * f(t * qk);
    const double term = w * q_power_gap(beta - 1.0 - ord.n, k + 1, p);
    sum += term;
    term_max = std::max(term_max, std::abs(term));
    if (std::abs(term) <= p.trunc_tol * term_max) {
      if (++small_streak >= 2) {
        converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
    qk *= p.q;
  }
  if (!converged)
    throw TruncationNotConverged("rl_derivative: term cap reached before tolerance");
  return coef / q_gamma(beta, p) * std::pow(t, beta - 1.0 - ord.n) * sum;
}

double q_derivative_at_zero(const RealFn& f, int i, const QParams& p) {
  if (i < 0) throw DomainError("q_derivative_at_zero: order must be >= 0");
  if (i == 0) return f(0.0);
  // Classical forward differences at step h, Richardson over h, h/2, h/4, h/8.
  const double h0 = 0.4 / static_cast<double>(i);
  std::vector<double> binom(i + 1);
  binom[0] = 1.0;
  for (int j = 1; j <= i; ++j) binom[j] = binom[j - 1] * (i - j + 1) / j;
  auto deriv_est = [&](double h) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom[j] * f(j * h);
    }
    return acc / std::pow(h, i);
  };
  constexpr int kLevels = 4;
  double tab[kLevels];
  for (int m = 0; m < kLevels; ++m) tab[m] = deriv_est(h0 / std::pow(2.0, m));
  for (int l = 1; l < kLevels; ++l)
    for (int m = kLevels - 1; m >= l; --m)
      tab[m] = tab[m] + (tab[m] - tab[m - 1]) / (std::pow(2.0, l) - 1.0);
  const double classical = tab[kLevels - 1];
  // (D_q^i f)(0) = [i]_q! / i! * f^(i)(0)
  double fact = 1.0;
  for (int j = 2; j <= i; ++j) fact *= j;
  return q_factorial(i, p) / fact * classical;
}

double caputo_derivative(const RealFn& f, double alpha, double t, const QParams& p) {
  if (!(alpha > 0.0)) throw DomainError("caputo_derivative: alpha must be > 0");
  if (!(t > 0.0)) throw DomainError("caputo_derivative: t must be > 0");
  const FracOrder ord = FracOrder::of(alpha);
  if (ord.is_integer()) return q_derivative_n(f, ord.n, t, p);
  double value = rl_derivative(f, alpha, t, p);
  for (int i = 0; i < ord.n; ++i) {
    const double d0 = q_derivative_at_zero(f, i, p);
    if (d0 != 0.0)
      value -= d0 * std::pow(t, i - alpha) / q_gamma(i + 1.0 - alpha, p);
  }
  return value;
}

double taylor_remainder(const RealFn& f, double alpha, double t, const QParams& p) {
  const FracOrder ord = FracOrder::of(alpha);
  if (ord.is_integer()) throw DomainError("taylor_remainder: alpha must not be an integer");
  // The inner Caputo values sit on a noise floor proportional to their own
  // truncation tolerance times s^{-alpha}; evaluating them two decades
  // tighter keeps that floor safely below the outer integral's term cutoff.
  const QParams inner(p.q, p.trunc_tol * 1e-2, p.max_terms);
  auto cd = [&](double s) {
    if (s < 1e-13) return 0.0;  // true value is O(s^{n-alpha}) there
    return caputo_derivative(f, alpha, s, inner);
  };
  return rl_integral(cd, alpha, t, p) - f(t);
}

// ---------------------------------------------------------------------------
// QIntegralImage

double QIntegralImage::eval(double t, const QParams& p) const {
  if (t < 0.0) throw DomainError("QIntegralImage::eval: t must be >= 0");
  double acc = a1 * t + a0;
  if (t == 0.0) return acc;
  const double inv_gamma = 1.0 / q_gamma(alpha, p);
  double u = p.q;  // u_k = q^{k+1}
  double sing = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (u <= t && w[k] != 0.0) sing += w[k] * q_power_frac(t, u, alpha - 1.0, p);
    u *= p.q;
  }
  return acc - inv_gamma * sing;
}

double QIntegralImage::eval_at_exp(int j, const QParams& p) const {
  if (j < 0) throw DomainError("QIntegralImage::eval_at_exp: exponent must be >= 0");
  const double t = std::pow(p.q, j);
  double acc = a1 * t + a0;
  const double talpha = std::pow(t, alpha - 1.0);
  const double inv_gamma = 1.0 / q_gamma(alpha, p);
  double sing = 0.0;
  // u_k = q^{k+1} <= t with gap d = k+1-j >= 1 (d = 0 contributes nothing).
  for (std::size_t k = static_cast<std::size_t>(j); k < w.size(); ++k) {
    const int d = static_cast<int>(k) + 1 - j;
    if (w[k] != 0.0) sing += w[k] * q_power_gap(alpha - 1.0, d, p);
  }
  return acc - inv_gamma * talpha * sing;
}

double QIntegralImage::dqn_at_exp(int nder, int s_exp, const QParams& p) const {
  if (nder < 0 || s_exp < 0) throw DomainError("QIntegralImage::dqn_at_exp: bad arguments");
  if (nder == 0) return eval_at_exp(s_exp, p);
  double acc = (nder == 1) ? a1 : 0.0;
  double coef = 1.0;
  for (int i = 1; i <= nder; ++i) coef *= q_bracket(alpha - i, p);
  const double s = std::pow(p.q, s_exp);
  const double spow = std::pow(s, alpha - 1.0 - nder);
  const double inv_gamma = 1.0 / q_gamma(alpha, p);
  double sing = 0.0;
  for (std::size_t k = static_cast<std::size_t>(s_exp); k < w.size(); ++k) {
    const int d = static_cast<int>(k) + 1 - s_exp;
    if (w[k] != 0.0) sing += w[k] * q_power_gap(alpha - 1.0 - nder, d, p);
  }
  return acc - inv_gamma * coef * spow * sing;
}

double QIntegralImage::caputo_at_exp(int t_exp, const QParams& p) const {
  const FracOrder ord = FracOrder::of(alpha);
  if (ord.is_integer())
    throw DomainError("QIntegralImage::caputo_at_exp: integer alpha not supported here");
  const int n = ord.n;
  const int kmax = static_cast<int>(w.size()) - 1;
  const double t = std::pow(p.q, t_exp);
  double coef = 1.0;
  for (int i = 1; i <= n; ++i) coef *= q_bracket(alpha - i, p);
  const double inv_gamma_a = 1.0 / q_gamma(alpha, p);
  const double inv_gamma_na = 1.0 / q_gamma(n - alpha, p);

  // Cache the two lattice-gap tables; gaps run up to the deepest kink.
  const int dmax = kmax + 2 - t_exp;
  if (dmax < 1) return 0.0;  // t below every kink: x is affine there
  std::vector<double> gap_out(dmax + 1), gap_ker(dmax + 1);
  for (int d = 1; d <= dmax; ++d) {
    gap_out[d] = q_power_gap(n - alpha - 1.0, d, p);
    gap_ker[d] = q_power_gap(alpha - 1.0 - n, d, p);
  }

  // C D^alpha x(t) = (1/Gamma_q(n-alpha)) int_0^t (t - q s)^{(n-alpha-1)} D^n x(s) d_q s,
  // with s = q^{t_exp+m}; D^n x vanishes identically below the deepest kink.
  double outer = 0.0;
  const double t_out_pow = std::pow(t, n - alpha - 1.0);
  for (int m = 0; t_exp + m <= kmax; ++m) {
    const int s_exp = t_exp + m;
    const double s = std::pow(p.q, s_exp);
    double inner = 0.0;
    for (int k = s_exp; k <= kmax; ++k) {
      const int d = k + 1 - s_exp;
      if (w[k] != 0.0) inner += w[k] * gap_ker[d];
    }
    if (inner == 0.0) continue;
    const double dnx = -inv_gamma_a * coef * std::pow(s, alpha - 1.0 - n) * inner;
    outer += std::pow(p.q, m) * t_out_pow * gap_out[m + 1] * dnx;
  }
  return inv_gamma_na * t * (1.0 - p.q) * outer;
}

}  // namespace qgreen
