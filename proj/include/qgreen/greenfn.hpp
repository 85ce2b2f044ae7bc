#ifndef QGREEN_GREENFN_HPP
#define QGREEN_GREENFN_HPP

#include <functional>
#include <optional>
#include <vector>

#include "qgreen/fracops.hpp"
#include "qgreen/measure.hpp"

namespace qgreen {

/// Full parameter set of the boundary value problem
///   C D^alpha x(t) + lambda h(t) f(t, x(t)) = 0 on (0,1),
///   x(0) = sum gamma_i x(zeta_i),
///   C D^2 x(0) = ... = C D^{n-1} x(0) = 0,
///   nu C D x(1) - mu int_0^1 x dLambda = sum beta_i C D x(zeta_i).
struct ProblemSpec {
  FracOrder order;
  QParams qp;
  std::vector<double> gammas;
  std::vector<double> betas;
  std::vector<double> zetas;
  double nu = 1.0;
  double mu = 0.0;
  StieltjesMeasure measure;
  double lambda = 1.0;
  std::function<double(double)> h;
  std::function<double(double, double)> f;
  std::function<double(double)> y_ell;
  int quad_order = 32;

  // Throws ConfigError with a field path on any structural violation.
  void validate_structure() const;
};

struct GreenConstants {
  double delta = 0;   // 1 - sum gamma_i
  double cshift = 0;  // sum gamma_i zeta_i / delta
  double sigma = 0;   // 1 + cshift
  double B = 0;       // int_0^1 (t + cshift) dLambda
  double rho = 0;     // nu - sum beta_i - mu B
  double Phat = 0;    // 1 + mu B / rho
  double Ptilde = 0;  // sum beta_i / (rho Gamma_q(alpha-1))
};

struct HypothesisReport {
  GreenConstants constants;
  bool rho_positive = false;
  bool B_nonneg = false;
  bool phi_nonneg = false;
  double phi_min_sampled = 0;
  double psi1_min_sampled = 0;
  int samples = 0;
  double check_tol = 1e-10;

  bool pass() const { return rho_positive && B_nonneg && phi_nonneg; }
};

GreenConstants compute_constants(const ProblemSpec& spec);

/// Evaluators for the kernel pieces H1, H2, H3, phi, G and the bound
/// functions psi1, psi2.  All methods are pure given the constructed state;
/// the phi values used by G are recomputed per call (solver-side caching is
/// done against lattice indices, see GreenLatticeTables).
class GreenEvaluator {
 public:
  explicit GreenEvaluator(const ProblemSpec& spec);

  const GreenConstants& constants() const { return gc_; }
  const ProblemSpec& spec() const { return spec_; }
  double gamma_alpha() const { return gamma_alpha_; }
  double gamma_alpha_m1() const { return gamma_alpha_m1_; }

  // u = q tau throughout; the case split compares u against t (H1) or the
  // zeta_i (H2, H3).
  double H1(double t, double tau) const;
  double H2(double t, double tau) const;
  double H3(double t, double tau, double zeta_i) const;
  double phi(double tau) const;
  double G(double t, double tau) const;
  double G(double t, double tau, double phi_tau) const;
  double psi1(double tau) const;
  double psi2(double tau) const;

  // Decomposition G(t,tau) = (t + cshift) Kcoef(tau) + Mcoef(tau)
  //                          - 1[u <= t] (t-u)^{(alpha-1)} / Gamma_q(alpha).
  double Kcoef(double tau) const;
  double Kcoef(double tau, double phi_tau) const;
  double Mcoef(double tau) const;

  HypothesisReport validate(int n_tau_samples = 201) const;

 private:
  ProblemSpec spec_;
  GreenConstants gc_;
  double gamma_alpha_;     // Gamma_q(alpha)
  double gamma_alpha_m1_;  // Gamma_q(alpha-1)

  double prefactor(double t, double tau) const;  // [t+cshift]/(2 Gamma_q(alpha-1)) (1-u)^{(alpha-2)}
  double kernel_pow(double tau, double order) const;  // (1-u)^{(order)}
};

}  // namespace qgreen

#endif
