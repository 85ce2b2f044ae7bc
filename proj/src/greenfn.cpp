#include "qgreen/greenfn.hpp"

#include <cmath>
#include <string>

namespace qgreen {

void ProblemSpec::validate_structure() const {
  if (!(order.alpha > 0.0)) throw ConfigError("problem.alpha", "must be > 0");
  if (order.n <= 2)
    throw ConfigError("problem.alpha", "requires n > 2, i.e. alpha > 2 (got alpha = " +
                                           std::to_string(order.alpha) + ")");
  if (gammas.size() != zetas.size() || betas.size() != zetas.size())
    throw ConfigError("problem.zetas", "gammas, betas and zetas must have equal length");
  double gsum = 0.0;
  for (double g : gammas) {
    if (g < 0.0) throw ConfigError("problem.gammas", "entries must be >= 0");
    gsum += g;
  }
  if (!(gsum < 1.0))
    throw ConfigError("problem.gammas", "sum must be < 1 (got " + std::to_string(gsum) + ")");
  for (double b : betas)
    if (b < 0.0) throw ConfigError("problem.betas", "entries must be >= 0");
  double prev = 0.0;
  for (double z : zetas) {
    if (!(z > 0.0) || !(z < 1.0))
      throw ConfigError("problem.zetas", "entries must lie strictly inside (0,1)");
    if (!(z > prev)) throw ConfigError("problem.zetas", "entries must be strictly increasing");
    prev = z;
  }
  if (!(nu > 0.0)) throw ConfigError("problem.nu", "must be > 0");
  if (mu < 0.0) throw ConfigError("problem.mu", "must be >= 0");
  if (!(lambda > 0.0)) throw ConfigError("problem.lambda", "must be > 0");
  measure.validate();
}

GreenConstants compute_constants(const ProblemSpec& spec) {
  GreenConstants gc;
  double gsum = 0.0, gzsum = 0.0, bsum = 0.0;
  for (std::size_t i = 0; i < spec.gammas.size(); ++i) {
    gsum += spec.gammas[i];
    gzsum += spec.gammas[i] * spec.zetas[i];
  }
  for (double b : spec.betas) bsum += b;
  gc.delta = 1.0 - gsum;
  if (!(gc.delta > 0.0)) throw HypothesisViolation("delta = 1 - sum gamma_i must be > 0");
  gc.cshift = gzsum / gc.delta;
  gc.sigma = 1.0 + gc.cshift;
  gc.B = stieltjes_integrate([&](double t) { return t + gc.cshift; }, spec.measure, {},
                             spec.quad_order);
  gc.rho = spec.nu - bsum - spec.mu * gc.B;
  const double gamma_am1 = q_gamma(spec.order.alpha - 1.0, spec.qp);
  if (gc.rho != 0.0) {
    gc.Phat = 1.0 + spec.mu * gc.B / gc.rho;
    gc.Ptilde = bsum / (gc.rho * gamma_am1);
  }
  return gc;
}

GreenEvaluator::GreenEvaluator(const ProblemSpec& spec)
    : spec_(spec),
      gc_(compute_constants(spec)),
      gamma_alpha_(q_gamma(spec.order.alpha, spec.qp)),
      gamma_alpha_m1_(q_gamma(spec.order.alpha - 1.0, spec.qp)) {}

double GreenEvaluator::kernel_pow(double tau, double order) const {
  return q_power_frac(1.0, spec_.qp.q * tau, order, spec_.qp);
}

double GreenEvaluator::prefactor(double t, double tau) const {
  return (t + gc_.cshift) / (2.0 * gamma_alpha_m1_) * kernel_pow(tau, spec_.order.alpha - 2.0);
}

double GreenEvaluator::H1(double t, double tau) const {
  const double u = spec_.qp.q * tau;
  double v = prefactor(t, tau);
  if (u <= t)
    v -= q_power_frac(t, u, spec_.order.alpha - 1.0, spec_.qp) / gamma_alpha_;
  return v;
}

double GreenEvaluator::H2(double t, double tau) const {
  const double u = spec_.qp.q * tau;
  double v = prefactor(t, tau);
  // Each zeta_i carries its own indicator; the subtraction is summed over i.
  for (std::size_t i = 0; i < spec_.zetas.size(); ++i) {
    if (u <= spec_.zetas[i] && spec_.gammas[i] != 0.0)
      v -= spec_.gammas[i] / (gc_.delta * gamma_alpha_) *
           q_power_frac(spec_.zetas[i], u, spec_.order.alpha - 1.0, spec_.qp);
  }
  return v;
}

double GreenEvaluator::H3(double t, double tau, double zeta_i) const {
  const double u = spec_.qp.q * tau;
  double bracket = kernel_pow(tau, spec_.order.alpha - 2.0);
  if (u <= zeta_i)
    bracket -= q_power_frac(zeta_i, u, spec_.order.alpha - 2.0, spec_.qp);
  return (t + gc_.cshift) / gamma_alpha_m1_ * bracket;
}

double GreenEvaluator::phi(double tau) const {
  if (spec_.measure.is_zero()) return 0.0;
  const double u = spec_.qp.q * tau;
  auto integrand = [&](double t) { return H1(t, tau) + H2(t, tau); };
  return stieltjes_integrate(integrand, spec_.measure, {u}, spec_.quad_order);
}

double GreenEvaluator::Kcoef(double tau) const { return Kcoef(tau, phi(tau)); }

double GreenEvaluator::Kcoef(double tau, double phi_tau) const {
  const double a = spec_.order.alpha;
  const double u = spec_.qp.q * tau;
  const double k2 = kernel_pow(tau, a - 2.0);
  double v = k2 / gamma_alpha_m1_;
  bool has_beta = false;
  double h3sum = 0.0;  // H3(t,tau;zeta_i) = (t + cshift) h3_i(tau)
  for (std::size_t i = 0; i < spec_.betas.size(); ++i) {
    if (spec_.betas[i] == 0.0) continue;
    has_beta = true;
    double bracket = k2;
    if (u <= spec_.zetas[i])
      bracket -= q_power_frac(spec_.zetas[i], u, a - 2.0, spec_.qp);
    h3sum += spec_.betas[i] * bracket / gamma_alpha_m1_;
  }
  const bool has_mu = spec_.mu != 0.0 && !spec_.measure.is_zero();
  if ((has_beta || has_mu) && !(gc_.rho > 0.0))
    throw HypothesisViolation("rho must be > 0 to assemble G");
  if (has_beta) v += h3sum / gc_.rho;
  if (has_mu) v += spec_.mu / gc_.rho * phi_tau;
  return v;
}

double GreenEvaluator::Mcoef(double tau) const {
  const double u = spec_.qp.q * tau;
  double acc = 0.0;
  for (std::size_t i = 0; i < spec_.zetas.size(); ++i) {
    if (u <= spec_.zetas[i] && spec_.gammas[i] != 0.0)
      acc -= spec_.gammas[i] / (gc_.delta * gamma_alpha_) *
             q_power_frac(spec_.zetas[i], u, spec_.order.alpha - 1.0, spec_.qp);
  }
  return acc;
}

double GreenEvaluator::G(double t, double tau) const { return G(t, tau, phi(tau)); }

double GreenEvaluator::G(double t, double tau, double phi_tau) const {
  double v = H1(t, tau) + H2(t, tau);
  const bool needs_rho = !spec_.betas.empty() || (spec_.mu != 0.0 && !spec_.measure.is_zero());
  if (needs_rho && !(gc_.rho > 0.0))
    throw HypothesisViolation("rho = " + std::to_string(gc_.rho) + " must be > 0 to evaluate G");
  for (std::size_t i = 0; i < spec_.betas.size(); ++i)
    if (spec_.betas[i] != 0.0) v += spec_.betas[i] / gc_.rho * H3(t, tau, spec_.zetas[i]);
  if (spec_.mu != 0.0 && !spec_.measure.is_zero())
    v += (t + gc_.cshift) * spec_.mu / gc_.rho * phi_tau;
  return v;
}

double GreenEvaluator::psi1(double tau) const {
  const double a = spec_.order.alpha;
  const double k2 = kernel_pow(tau, a - 2.0);
  const double k1 = kernel_pow(tau, a - 1.0);
  double v = (gc_.sigma / gamma_alpha_m1_ * k2 - k1 / (gc_.delta * gamma_alpha_)) * gc_.Phat;
  if (!spec_.zetas.empty() && gc_.Ptilde != 0.0) {
    const double zlast = spec_.zetas.back();
    const double u = spec_.qp.q * tau;
    double bracket = k2;
    if (u <= zlast) bracket -= q_power_frac(zlast, u, a - 2.0, spec_.qp);
    v += bracket * gc_.Ptilde;
  }
  return v;
}

double GreenEvaluator::psi2(double tau) const {
  return (gc_.Phat / gamma_alpha_m1_ + gc_.Ptilde) * kernel_pow(tau, spec_.order.alpha - 2.0);
}

HypothesisReport GreenEvaluator::validate(int n_tau_samples) const {
  HypothesisReport rep;
  rep.constants = gc_;
  rep.check_tol = 1e-10;
  rep.samples = n_tau_samples;
  rep.rho_positive = gc_.rho > 0.0;
  rep.B_nonneg = gc_.B >= -rep.check_tol;
  double phi_min = 0.0, psi1_min = 0.0;
  for (int i = 0; i < n_tau_samples; ++i) {
    const double tau = (i + 0.5) / n_tau_samples;
    const double ph = phi(tau);
    const double ps = psi1(tau);
    if (i == 0 || ph < phi_min) phi_min = ph;
    if (i == 0 || ps < psi1_min) psi1_min = ps;
  }
  rep.phi_min_sampled = phi_min;
  rep.psi1_min_sampled = psi1_min;
  rep.phi_nonneg = phi_min >= -rep.check_tol;
  return rep;
}

}  // namespace qgreen
