#ifndef QGREEN_SOLVER_HPP
#define QGREEN_SOLVER_HPP

#include <memory>
#include <optional>

#include "qgreen/greenfn.hpp"

namespace qgreen {

struct ResidualReport;  // defined in verify.hpp, filled by the verify module

/// Function carried on the q-geometric lattice plus the point 0.  Solver
/// images also carry
///  - their kernel expansion (QIntegralImage), the object fractional
///    derivatives are taken of, and
///  - values on the auxiliary rays {anchor q^m} (anchors: the zeta_i, the
///    Stieltjes quadrature nodes, atom locations), which the integral
///    operator needs because Jackson integrals anchor at their upper limit.
struct QGridFunction {
  QLattice lattice;
  std::vector<double> values;  // at q^0 .. q^K
  double value0 = 0.0;
  std::function<double(double)> evaluator;
  std::optional<QIntegralImage> image;
  std::vector<std::vector<double>> aux;  // aux[r][m] = x(anchor_r q^m)

  double at_depth(int k) const;        // value at q^k; below the lattice: the limit value
  double operator()(double t) const;   // continuous evaluation
  double sup_norm() const;
  QGridFunction scaled(double c) const;
};

double sup_diff(const QGridFunction& a, const QGridFunction& b);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 500;
  double lattice_eps = 1e-12;
  int lattice_cap = 200;
};

/// Iterate-independent data: the lattice, the Jackson depth, the lattice-gap
/// kernel tables, and the auxiliary ray anchors with their Stieltjes weights.
struct GreenLatticeTables {
  QLattice lattice;
  int jackson_depth = 0;          // Jackson sums run over tau_k = q^k, k <= jackson_depth
  std::vector<double> jackson_w;  // (1-q) q^k
  std::vector<double> kern2;      // (1 - q^{k+1})^{(alpha-2)}
  std::vector<double> gap_a1;     // gap(alpha-1, d), d = 1..jackson_depth+1
  std::vector<double> gap_a2;     // gap(alpha-2, d)

  std::vector<double> ray_anchors;  // zetas, then quadrature nodes, then atom locations
  std::size_t n_zeta = 0;
  std::size_t n_quad = 0;
  std::vector<double> quad_w;     // Stieltjes weight (GL weight x density x halfwidth)
  std::vector<double> atom_mass;  // masses of the trailing atom anchors

  static GreenLatticeTables build(const GreenEvaluator& green, const SolveOptions& opt);

  // I^order g at anchor q^shift from samples of g along the anchor's ray.
  double ray_integral(double order, const std::vector<double>& g_ray, double anchor,
                      int shift, const GreenEvaluator& green) const;
};

struct SolveReport {
  bool converged = false;
  int n_iters = 0;
  std::vector<double> sup_changes;
  double sup_norm = 0.0;
  double mu_hat = 0.0, nu_hat = 0.0;  // cone certificate: mu_hat p <= x* <= nu_hat p
  double fixed_point_residual = 0.0;
  QGridFunction first_iterate;  // x1
  QGridFunction solution;
  std::shared_ptr<ResidualReport> residuals;
};

struct SweepReport {
  std::vector<double> lambdas;
  std::vector<SolveReport> reports;
  bool pointwise_ordered = true;
  bool norms_increasing = true;
  std::vector<std::string> violations;
};

// p(t) = (t + cshift)/sigma sampled on the lattice and rays, exact evaluator.
QGridFunction cone_seed(const GreenEvaluator& green, const GreenLatticeTables& tables);

// x(t) = scale * int_0^1 G(t, q tau) g(tau) d_q tau, assembled through the
// boundary-condition coefficient functionals (each inner q-integral on its
// own anchored grid, which is what makes the result satisfy the boundary
// conditions exactly).  g must be evaluable on (0,1].
QGridFunction green_image(const RealFn& g, const GreenEvaluator& green,
                          const GreenLatticeTables& tables, double scale = 1.0);

// One application of the integral operator: g(tau) = h(tau) f(tau, x(tau)),
// with x read from the lattice and the carried rays.  Throws NegativeInput if
// x dips below -1e-12 anywhere.  The result carries a continuous evaluator
// only when x itself does (it is needed to compose g off the stored rays).
QGridFunction apply_T(const QGridFunction& x, const GreenEvaluator& green,
                      const GreenLatticeTables& tables, double scale = 1.0);

SolveReport solve(const GreenEvaluator& green, const SolveOptions& opt = {},
                  std::optional<QGridFunction> x0 = std::nullopt);

// Solves for each lambda (strictly increasing, positive) and checks the
// pointwise ordering and norm growth; violations are flagged, not thrown.
SweepReport lambda_sweep(const GreenEvaluator& green, const std::vector<double>& lambdas,
                         const SolveOptions& opt = {});

}  // namespace qgreen

#endif
