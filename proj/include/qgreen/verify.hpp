#ifndef QGREEN_VERIFY_HPP
#define QGREEN_VERIFY_HPP

#include <string>

#include "qgreen/solver.hpp"

namespace qgreen {

/// ODE and boundary-condition residuals of a candidate solution.  The Caputo
/// derivative is evaluated on the candidate's kernel expansion (fracops), a
/// route the solver itself never exercises.
struct ResidualReport {
  double ode_residual_sup = 0.0;
  double bc0_residual = 0.0;
  std::vector<double> bc_der_residuals;  // |C D^j x(0)| for j = 2..n-1
  double bc_mixed_residual = 0.0;
  double forcing_sup = 0.0;  // scale of the forcing term, for context

  double worst_bc() const;
};

// Residuals against the problem's own forcing lambda h(t) f(t, x(t)).
ResidualReport check_residuals(const QGridFunction& x, const GreenEvaluator& green);

// Residuals against an explicit forcing y: C D^alpha x + y should vanish.
ResidualReport check_residuals_forcing(const QGridFunction& x, const GreenEvaluator& green,
                                       const RealFn& forcing);

// x(t) = int_0^1 G(t, q tau) y(tau) d_q tau.
QGridFunction green_reconstruct(const RealFn& y, const GreenEvaluator& green,
                                const SolveOptions& opt = {});

/// Sampled checks of the structural hypotheses on f, h and y(ell):
/// nonnegativity, monotonicity in x, the concavity-type lower bound
/// f(t, ell x) >= y(ell) f(t, x), and y(ell) in (ell, 1).
struct FHypothesisReport {
  int samples = 0;
  double x_max = 0.0;
  long f_negative = 0;
  long h_negative = 0;
  long f_not_increasing = 0;
  long y_out_of_range = 0;
  long scaling_violations = 0;  // f(t, ell x) < y(ell) f(t,x) - tol
  bool f_at_zero_nonzero = false;
  bool h_nonzero = false;
  double worst_scaling_margin = 0.0;

  bool pass() const {
    return f_negative == 0 && h_negative == 0 && f_not_increasing == 0 &&
           y_out_of_range == 0 && scaling_violations == 0 && f_at_zero_nonzero && h_nonzero;
  }
};

FHypothesisReport check_f_hypotheses(const ProblemSpec& spec, int n_samples = 50,
                                     double x_max = 10.0);

/// Grid-sampled kernel inequalities.  Margins are minima over the grid;
/// a negative margin is a violation of the corresponding bound.
struct GreenPropertyReport {
  int grid_n = 0;
  double min_H1 = 0, min_H2 = 0, min_H3 = 0;      // positivity of the pieces
  double margin_i_upper = 0;                       // sigma-bound on H1+H2
  double margin_ii_lower = 0, margin_ii_upper = 0; // t=1 sandwich with zeta -> 1
  double margin_iii_lower = 0, margin_iii_upper = 0;  // psi sandwich on G
  double worst_t = 0, worst_tau = 0;               // witness of the worst margin

  double worst() const;
};

GreenPropertyReport check_green_properties(const GreenEvaluator& green, int grid_n = 100);

}  // namespace qgreen

#endif
