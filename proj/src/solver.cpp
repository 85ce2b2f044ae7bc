#include "qgreen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgreen/verify.hpp"

namespace qgreen {

double QGridFunction::at_depth(int k) const {
  if (k < 0) throw DomainError("QGridFunction::at_depth: negative exponent");
  if (k <= lattice.depth) return values[k];
  return value0;  // below lattice resolution the limit value applies
}

double QGridFunction::operator()(double t) const {
  if (!evaluator) throw DomainError("QGridFunction: no continuous evaluator attached");
  return evaluator(t);
}

double QGridFunction::sup_norm() const {
  double m = std::abs(value0);
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

QGridFunction QGridFunction::scaled(double c) const {
  QGridFunction out = *this;
  for (double& v : out.values) v *= c;
  out.value0 *= c;
  for (auto& ray : out.aux)
    for (double& v : ray) v *= c;
  if (evaluator) {
    auto base = evaluator;
    out.evaluator = [base, c](double t) { return c * base(t); };
  }
  if (image) {
    out.image->a0 *= c;
    out.image->a1 *= c;
    for (double& w : out.image->w) w *= c;
  }
  return out;
}

double sup_diff(const QGridFunction& a, const QGridFunction& b) {
  if (a.values.size() != b.values.size())
    throw DomainError("sup_diff: lattice size mismatch");
  double m = std::abs(a.value0 - b.value0);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

GreenLatticeTables GreenLatticeTables::build(const GreenEvaluator& green,
                                             const SolveOptions& opt) {
  const ProblemSpec& spec = green.spec();
  const QParams& qp = spec.qp;
  const double a = spec.order.alpha;

  GreenLatticeTables t;
  t.lattice = QLattice(qp.q, opt.lattice_eps, opt.lattice_cap);
  // Depth of the fixed Jackson sums: q^K (1 + K ln(1/q)) <= trunc_tol covers
  // integrands with a logarithmic endpoint singularity.
  const double lq = std::log(1.0 / qp.q);
  int kj = t.lattice.depth;
  while (std::pow(qp.q, kj) * (1.0 + kj * lq) > qp.trunc_tol && kj < qp.max_terms) ++kj;
  t.jackson_depth = kj;
  t.jackson_w.resize(kj + 1);
  t.kern2.resize(kj + 1);
  t.gap_a1.resize(kj + 2);
  t.gap_a2.resize(kj + 2);
  for (int k = 0; k <= kj; ++k) {
    const double tau = std::pow(qp.q, k);
    t.jackson_w[k] = (1.0 - qp.q) * tau;
    t.kern2[k] = q_power_frac(1.0, qp.q * tau, a - 2.0, qp);
  }
  for (int d = 1; d <= kj + 1; ++d) {
    t.gap_a1[d] = q_power_gap(a - 1.0, d, qp);
    t.gap_a2[d] = q_power_gap(a - 2.0, d, qp);
  }

  for (double z : spec.zetas) t.ray_anchors.push_back(z);
  t.n_zeta = spec.zetas.size();
  if (spec.mu != 0.0 && !spec.measure.is_zero()) {
    bool density_nonzero = false;
    for (double c : spec.measure.density)
      if (c != 0.0) density_nonzero = true;
    if (density_nonzero) {
      const QuadRule rule = gauss_legendre(spec.quad_order);
      for (int i = 0; i < spec.quad_order; ++i) {
        const double node = 0.5 * (rule.nodes[i] + 1.0);
        t.ray_anchors.push_back(node);
        t.quad_w.push_back(0.5 * rule.weights[i] * spec.measure.density_at(node));
      }
      t.n_quad = static_cast<std::size_t>(spec.quad_order);
    }
    for (const auto& [loc, mass] : spec.measure.atoms) {
      if (mass == 0.0) continue;
      t.ray_anchors.push_back(loc);
      t.atom_mass.push_back(mass);
    }
  }
  return t;
}

double GreenLatticeTables::ray_integral(double order, const std::vector<double>& g_ray,
                                        double anchor, int shift,
                                        const GreenEvaluator& green) const {
  // I^order g at s = anchor q^shift:
  //   s^order (1-q)/Gamma_q(order) sum_m q^m gap(order-1, m+1) g(s q^m)
  const QParams& qp = green.spec().qp;
  const std::vector<double>& gap =
      (order == green.spec().order.alpha) ? gap_a1 : gap_a2;
  const double s = anchor * std::pow(qp.q, shift);
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  double qm = 1.0;
  for (int m = 0; m + shift <= jackson_depth; ++m) {
    acc += qm * gap[m + 1] * g_ray[m + shift];
    qm *= qp.q;
  }
  const double gamma = (order == green.spec().order.alpha) ? green.gamma_alpha()
                                                           : green.gamma_alpha_m1();
  return std::pow(s, order) * (1.0 - qp.q) / gamma * acc;
}

QGridFunction cone_seed(const GreenEvaluator& green, const GreenLatticeTables& tables) {
  const GreenConstants& gc = green.constants();
  const double c = gc.cshift, s = gc.sigma;
  const double q = tables.lattice.q;
  QGridFunction p;
  p.lattice = tables.lattice;
  p.values.resize(p.lattice.depth + 1);
  for (int k = 0; k <= p.lattice.depth; ++k)
    p.values[k] = (p.lattice.nodes[k] + c) / s;
  p.value0 = c / s;
  p.evaluator = [c, s](double t) { return (t + c) / s; };
  QIntegralImage img;
  img.alpha = green.spec().order.alpha;
  img.a1 = 1.0 / s;
  img.a0 = c / s;
  p.image = img;
  p.aux.resize(tables.ray_anchors.size());
  for (std::size_t r = 0; r < tables.ray_anchors.size(); ++r) {
    p.aux[r].resize(tables.jackson_depth + 1);
    for (int m = 0; m <= tables.jackson_depth; ++m)
      p.aux[r][m] = (tables.ray_anchors[r] * std::pow(q, m) + c) / s;
  }
  return p;
}

namespace {

struct Coefficients {
  double c0 = 0, c1 = 0;
};

// The boundary-condition coefficients of x = -I^alpha g + c0 + c1 t:
//   c1 = I^{a-1}g(1) + (1/rho) sum beta_i [I^{a-1}g(1) - I^{a-1}g(zeta_i)]
//        + (mu/rho) int_0^1 [ (t+cshift) I^{a-1}g(1) - I^a g(t)
//                             - (1/delta) sum gamma_j I^a g(zeta_j) ] dLambda(t)
//   c0 = cshift c1 - (1/delta) sum gamma_i I^a g(zeta_i)
Coefficients assemble_coefficients(const std::vector<double>& g_lattice,
                                   const std::vector<std::vector<double>>& g_rays,
                                   const GreenEvaluator& green,
                                   const GreenLatticeTables& tables) {
  const ProblemSpec& spec = green.spec();
  const GreenConstants& gc = green.constants();
  const double a = spec.order.alpha;

  // I^{alpha-1} g(1) on the unit lattice
  double acc = 0.0;
  for (int k = 0; k <= tables.jackson_depth; ++k)
    acc += tables.jackson_w[k] * tables.kern2[k] * g_lattice[k];
  const double ia1_1 = acc / green.gamma_alpha_m1();

  std::vector<double> ia_zeta(spec.zetas.size(), 0.0);
  double beta_sum = 0.0;
  bool has_beta = false;
  for (std::size_t i = 0; i < spec.zetas.size(); ++i) {
    ia_zeta[i] = tables.ray_integral(a, g_rays[i], spec.zetas[i], 0, green);
    if (spec.betas[i] != 0.0) {
      has_beta = true;
      const double ia1_z =
          tables.ray_integral(a - 1.0, g_rays[i], spec.zetas[i], 0, green);
      beta_sum += spec.betas[i] * (ia1_1 - ia1_z);
    }
  }
  double gamma_ia = 0.0;
  for (std::size_t i = 0; i < spec.gammas.size(); ++i)
    gamma_ia += spec.gammas[i] * ia_zeta[i];

  double stieltjes = 0.0;
  const bool has_mu = spec.mu != 0.0 && !spec.measure.is_zero();
  if (has_mu) {
    auto integrand_at = [&](std::size_t ray, double anchor) {
      const double ia_t = tables.ray_integral(a, g_rays[ray], anchor, 0, green);
      return (anchor + gc.cshift) * ia1_1 - ia_t - gamma_ia / gc.delta;
    };
    for (std::size_t i = 0; i < tables.n_quad; ++i) {
      const std::size_t r = tables.n_zeta + i;
      stieltjes += tables.quad_w[i] * integrand_at(r, tables.ray_anchors[r]);
    }
    for (std::size_t i = 0; i < tables.atom_mass.size(); ++i) {
      const std::size_t r = tables.n_zeta + tables.n_quad + i;
      stieltjes += tables.atom_mass[i] * integrand_at(r, tables.ray_anchors[r]);
    }
  }

  if ((has_beta || has_mu) && !(gc.rho > 0.0))
    throw HypothesisViolation("green_image: rho must be > 0");

  Coefficients c;
  c.c1 = ia1_1;
  if (has_beta) c.c1 += beta_sum / gc.rho;
  if (has_mu) c.c1 += spec.mu / gc.rho * stieltjes;
  c.c0 = gc.cshift * c.c1 - gamma_ia / gc.delta;
  return c;
}

QGridFunction assemble_image(const std::vector<double>& g_lattice,
                             const std::vector<std::vector<double>>& g_rays,
                             const GreenEvaluator& green, const GreenLatticeTables& tables,
                             double scale) {
  const ProblemSpec& spec = green.spec();
  const QParams& qp = spec.qp;
  const Coefficients c = assemble_coefficients(g_lattice, g_rays, green, tables);

  QIntegralImage img;
  img.alpha = spec.order.alpha;
  img.a1 = scale * c.c1;
  img.a0 = scale * c.c0;
  img.w.resize(g_lattice.size());
  for (std::size_t k = 0; k < g_lattice.size(); ++k)
    img.w[k] = scale * tables.jackson_w[k] * g_lattice[k];

  QGridFunction out;
  out.lattice = tables.lattice;
  out.values.resize(out.lattice.depth + 1);
  for (int j = 0; j <= out.lattice.depth; ++j) out.values[j] = img.eval_at_exp(j, qp);
  out.value0 = img.eval_zero();

  // Ray values x(anchor q^m) = scale (c0 + c1 s - I^alpha g(s)), each I^alpha
  // summed along its own ray.
  out.aux.resize(g_rays.size());
  for (std::size_t r = 0; r < g_rays.size(); ++r) {
    out.aux[r].resize(tables.jackson_depth + 1);
    const double anchor = tables.ray_anchors[r];
    for (int m = 0; m <= tables.jackson_depth; ++m) {
      const double s = anchor * std::pow(qp.q, m);
      const double ia = tables.ray_integral(spec.order.alpha, g_rays[r], anchor, m, green);
      out.aux[r][m] = scale * (c.c0 + c.c1 * s - ia);
    }
  }
  out.image = std::move(img);
  return out;
}

double clamp_nonneg(double v, const char* where) {
  if (v < 0.0) {
    if (v < -1e-12)
      throw NegativeInput(std::string(where) + ": iterate is negative (value " +
                          std::to_string(v) + ")");
    return 0.0;  // rounding-level dips are treated as 0
  }
  return v;
}

}  // namespace

QGridFunction green_image(const RealFn& g, const GreenEvaluator& green,
                          const GreenLatticeTables& tables, double scale) {
  const ProblemSpec& spec = green.spec();
  const QParams qp = spec.qp;
  std::vector<double> gl(tables.jackson_depth + 1);
  for (int k = 0; k <= tables.jackson_depth; ++k) gl[k] = g(std::pow(qp.q, k));
  std::vector<std::vector<double>> grays(tables.ray_anchors.size());
  for (std::size_t r = 0; r < tables.ray_anchors.size(); ++r) {
    grays[r].resize(tables.jackson_depth + 1);
    for (int m = 0; m <= tables.jackson_depth; ++m)
      grays[r][m] = g(tables.ray_anchors[r] * std::pow(qp.q, m));
  }
  QGridFunction out = assemble_image(gl, grays, green, tables, scale);
  // g is a fixed function, so the anchored form is directly evaluable anywhere.
  const double a0 = out.image->a0, a1 = out.image->a1;
  const double alpha = spec.order.alpha;
  out.evaluator = [g, a0, a1, alpha, scale, qp](double t) {
    if (t == 0.0) return a0;
    return a0 + a1 * t - scale * rl_integral(g, alpha, t, qp);
  };
  return out;
}

QGridFunction apply_T(const QGridFunction& x, const GreenEvaluator& green,
                      const GreenLatticeTables& tables, double scale) {
  const ProblemSpec& spec = green.spec();
  const QParams qp = spec.qp;
  if (x.aux.size() != tables.ray_anchors.size())
    throw DomainError("apply_T: iterate does not carry the auxiliary rays");

  std::vector<double> gl(tables.jackson_depth + 1);
  for (int k = 0; k <= tables.jackson_depth; ++k) {
    const double tau = std::pow(qp.q, k);
    gl[k] = spec.h(tau) * spec.f(tau, clamp_nonneg(x.at_depth(k), "apply_T"));
  }
  std::vector<std::vector<double>> grays(x.aux.size());
  for (std::size_t r = 0; r < x.aux.size(); ++r) {
    grays[r].resize(tables.jackson_depth + 1);
    for (int m = 0; m <= tables.jackson_depth; ++m) {
      const double tau = tables.ray_anchors[r] * std::pow(qp.q, m);
      grays[r][m] = spec.h(tau) * spec.f(tau, clamp_nonneg(x.aux[r][m], "apply_T"));
    }
  }
  QGridFunction out = assemble_image(gl, grays, green, tables, scale);
  if (x.evaluator) {
    // Compose through the given x: one recursion level, per the operator's
    // definition T x(t) = scale int G(t, q tau) h f(tau, x(tau)) d_q tau.
    auto xin = x.evaluator;
    auto h = spec.h;
    auto f = spec.f;
    const double a0 = out.image->a0, a1 = out.image->a1;
    const double alpha = spec.order.alpha;
    out.evaluator = [xin, h, f, a0, a1, alpha, scale, qp](double t) {
      if (t == 0.0) return a0;
      auto g = [&](double tau) { return h(tau) * f(tau, std::max(0.0, xin(tau))); };
      return a0 + a1 * t - scale * rl_integral(g, alpha, t, qp);
    };
  }
  return out;
}

namespace {

void cone_certificate(const QGridFunction& x, const QGridFunction& p, SolveReport& rep) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  auto absorb = [&](double xv, double pv) {
    if (pv <= 0.0) return;
    const double r = xv / pv;
    if (first) {
      lo = hi = r;
      first = false;
    } else {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  };
  for (std::size_t k = 0; k < x.values.size(); ++k) absorb(x.values[k], p.values[k]);
  absorb(x.value0, p.value0);
  rep.mu_hat = lo;
  rep.nu_hat = hi;
}

// Continuous evaluator for the converged solution: on the ray {t q^m} the
// fixed point satisfies x(s) = a0 + a1 s - scale I^alpha[h f(., x(.))](s)
// with the converged coefficients, so a few contraction sweeps started from
// the kernel-expansion values converge to x(t).
void attach_fixed_point_evaluator(QGridFunction& x, const GreenEvaluator& green,
                                  const GreenLatticeTables& tables, double scale,
                                  double tol) {
  const ProblemSpec& spec = green.spec();
  const QParams qp = spec.qp;
  const QIntegralImage img = *x.image;
  auto h = spec.h;
  auto f = spec.f;
  const double alpha = spec.order.alpha;
  const int depth = tables.jackson_depth;
  auto gap = std::make_shared<std::vector<double>>(tables.gap_a1);
  const double gamma_a = green.gamma_alpha();
  const int max_sweeps = 1000;
  // At lattice nodes the evaluator must reproduce the stored iterate values
  // bit-for-bit; elsewhere it converges the ray-local fixed point.
  auto nodes = std::make_shared<std::vector<double>>(x.lattice.nodes);
  auto vals = std::make_shared<std::vector<double>>(x.values);
  const double v0 = x.value0;
  x.evaluator = [img, h, f, alpha, scale, qp, depth, gap, gamma_a, tol, max_sweeps, nodes,
                 vals, v0](double t) {
    if (t == 0.0) return v0;
    for (std::size_t j = 0; j < vals->size(); ++j)
      if (t == (*nodes)[j]) return (*vals)[j];
    std::vector<double> xs(depth + 1), gs(depth + 1), ss(depth + 1);
    for (int m = 0; m <= depth; ++m) {
      ss[m] = t * std::pow(qp.q, m);
      xs[m] = img.eval(ss[m], qp);
    }
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      for (int m = 0; m <= depth; ++m)
        gs[m] = h(ss[m]) * f(ss[m], std::max(0.0, xs[m]));
      double change = 0.0;
      for (int m = 0; m <= depth; ++m) {
        double acc = 0.0;
        double qmm = 1.0;
        for (int mm = 0; m + mm <= depth; ++mm) {
          acc += qmm * (*gap)[mm + 1] * gs[m + mm];
          qmm *= qp.q;
        }
        const double ia = std::pow(ss[m], alpha) * (1.0 - qp.q) / gamma_a * acc;
        const double next = img.a0 + img.a1 * ss[m] - scale * ia;
        change = std::max(change, std::abs(next - xs[m]));
        xs[m] = next;
      }
      if (change < 1e-3 * tol) break;
    }
    return xs[0];
  };
}

}  // namespace

SolveReport solve(const GreenEvaluator& green, const SolveOptions& opt,
                  std::optional<QGridFunction> x0) {
  const ProblemSpec& spec = green.spec();
  const HypothesisReport hyp = green.validate();
  if (!hyp.pass())
    throw HypothesisViolation("solve: hypothesis check failed (rho = " +
                              std::to_string(hyp.constants.rho) +
                              ", B = " + std::to_string(hyp.constants.B) +
                              ", min phi = " + std::to_string(hyp.phi_min_sampled) + ")");

  const GreenLatticeTables tables = GreenLatticeTables::build(green, opt);
  const QGridFunction p = cone_seed(green, tables);

  SolveReport rep;
  QGridFunction x_prev = x0 ? std::move(*x0) : p;
  for (int n = 1; n <= opt.max_iter; ++n) {
    QGridFunction x_next = apply_T(x_prev, green, tables, spec.lambda);
    x_next.evaluator = nullptr;  // iterates travel by lattice and ray values only
    const double change = sup_diff(x_next, x_prev);
    rep.sup_changes.push_back(change);
    if (n == 1) rep.first_iterate = x_next;
    x_prev = std::move(x_next);
    rep.n_iters = n;
    if (change < opt.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = std::move(x_prev);
  rep.sup_norm = rep.solution.sup_norm();
  cone_certificate(rep.solution, p, rep);
  const QGridFunction tx = apply_T(rep.solution, green, tables, spec.lambda);
  rep.fixed_point_residual = sup_diff(tx, rep.solution);
  attach_fixed_point_evaluator(rep.solution, green, tables, spec.lambda, opt.tol);
  rep.residuals = std::make_shared<ResidualReport>(check_residuals(rep.solution, green));
  return rep;
}

SweepReport lambda_sweep(const GreenEvaluator& green, const std::vector<double>& lambdas,
                         const SolveOptions& opt) {
  if (lambdas.empty()) throw ConfigError("lambdas", "at least one lambda is required");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw ConfigError("lambdas", "entries must be > 0");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
      throw ConfigError("lambdas", "entries must be strictly increasing");
  }
  SweepReport sweep;
  sweep.lambdas = lambdas;
  for (double lam : lambdas) {
    ProblemSpec s = green.spec();
    s.lambda = lam;
    GreenEvaluator g(s);
    sweep.reports.push_back(solve(g, opt));
  }
  const double slack = 1e-8;
  for (std::size_t i = 0; i + 1 < sweep.reports.size(); ++i) {
    const QGridFunction& lo = sweep.reports[i].solution;
    const QGridFunction& hi = sweep.reports[i + 1].solution;
    for (std::size_t k = 0; k < lo.values.size(); ++k) {
      if (lo.values[k] > hi.values[k] + slack) {
        sweep.pointwise_ordered = false;
        sweep.violations.push_back("pointwise ordering fails at lambda pair (" +
                                   std::to_string(lambdas[i]) + ", " +
                                   std::to_string(lambdas[i + 1]) + "), node " +
                                   std::to_string(k));
        break;
      }
    }
    if (!(sweep.reports[i + 1].sup_norm > sweep.reports[i].sup_norm + opt.tol)) {
      sweep.norms_increasing = false;
      sweep.violations.push_back("sup-norm not strictly increasing at lambda pair (" +
                                 std::to_string(lambdas[i]) + ", " +
                                 std::to_string(lambdas[i + 1]) + ")");
    }
  }
  return sweep;
}

}  // namespace qgreen
