#include "qgreen/config.hpp"

#include <cmath>
#include <fstream>

#include "qgreen/expr.hpp"

namespace qgreen {

using nlohmann::json;

namespace {

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double require_number(const json& j, const std::string& key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(path, "missing required field");
  if (!v->is_number()) throw ConfigError(path, "must be a number");
  return v->get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(path, "missing required field");
  if (!v->is_string()) throw ConfigError(path, "must be a string");
  return v->get<std::string>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path, "must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void opt_number(const json& j, const char* key, double& slot) {
  if (const json* v = find(j, key)) slot = v->get<double>();
}
void opt_int(const json& j, const char* key, int& slot) {
  if (const json* v = find(j, key)) slot = v->get<int>();
}
void opt_string(const json& j, const char* key, std::string& slot) {
  if (const json* v = find(j, key)) slot = v->get<std::string>();
}

}  // namespace

std::vector<double> fit_polynomial_density(const std::string& src) {
  ExprPtr expr = parse(src);
  check_variables(*expr, {"t"});
  auto value = [&](double t) { return eval(*expr, {{"t", t}}); };

  constexpr int kMaxDeg = 20;
  for (int deg = 0; deg <= kMaxDeg; ++deg) {
    // Newton interpolation on Chebyshev nodes mapped to [0,1].
    const int npts = deg + 1;
    std::vector<double> xs(npts), fs(npts);
    for (int i = 0; i < npts; ++i) {
      const double c = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * npts));
      xs[i] = 0.5 * (c + 1.0);
      fs[i] = value(xs[i]);
    }
    std::vector<double> dd = fs;  // divided differences in place
    for (int lev = 1; lev < npts; ++lev)
      for (int i = npts - 1; i >= lev; --i)
        dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - lev]);
    // Expand the Newton form to monomial coefficients.
    std::vector<double> coef(npts, 0.0);
    for (int i = npts - 1; i >= 0; --i) {
      for (int k = npts - 1; k > 0; --k) coef[k] = coef[k - 1] - coef[k] * xs[i];
      coef[0] = dd[i] - coef[0] * xs[i];
      // coef = coef * (t - xs[i]) + dd[i], done coefficient-wise above
    }
    // Validate on midpoints.
    double scale = 1.0, worst = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double t = static_cast<double>(i) / 64.0;
      const double fv = value(t);
      scale = std::max(scale, std::abs(fv));
      double acc = 0.0;
      for (int k = npts - 1; k >= 0; --k) acc = acc * t + coef[k];
      worst = std::max(worst, std::abs(acc - fv));
    }
    if (worst <= 1e-9 * scale) {
      while (coef.size() > 1 && std::abs(coef.back()) <= 1e-12 * scale) coef.pop_back();
      return coef;
    }
  }
  throw ConfigError("problem.measure.density",
                    "expression is not a polynomial of degree <= 20");
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  const json* problem = find(j, "problem");
  if (!problem || !problem->is_object())
    throw ConfigError("problem", "missing required object");

  cfg.alpha = require_number(*problem, "alpha", "problem.alpha");
  cfg.q = require_number(*problem, "q", "problem.q");
  const json* g = find(*problem, "gammas");
  cfg.gammas = g ? number_array(*g, "problem.gammas") : std::vector<double>{};
  const json* b = find(*problem, "betas");
  cfg.betas = b ? number_array(*b, "problem.betas") : std::vector<double>{};
  const json* z = find(*problem, "zetas");
  cfg.zetas = z ? number_array(*z, "problem.zetas") : std::vector<double>{};
  cfg.nu = require_number(*problem, "nu", "problem.nu");
  cfg.mu = require_number(*problem, "mu", "problem.mu");
  opt_number(*problem, "lambda", cfg.lambda);
  cfg.h_src = require_string(*problem, "h", "problem.h");
  cfg.f_src = require_string(*problem, "f", "problem.f");
  cfg.y_src = require_string(*problem, "y_ell", "problem.y_ell");

  if (const json* meas = find(*problem, "measure")) {
    if (!meas->is_object()) throw ConfigError("problem.measure", "must be an object");
    if (const json* dens = find(*meas, "density")) {
      if (dens->is_array())
        cfg.measure.density = number_array(*dens, "problem.measure.density");
      else if (dens->is_string())
        cfg.measure.density = fit_polynomial_density(dens->get<std::string>());
      else
        throw ConfigError("problem.measure.density",
                          "must be a coefficient array or an expression string");
    }
    if (const json* atoms = find(*meas, "atoms")) {
      if (!atoms->is_array()) throw ConfigError("problem.measure.atoms", "must be an array");
      for (const auto& a : *atoms) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
          throw ConfigError("problem.measure.atoms", "entries must be [location, mass] pairs");
        cfg.measure.atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
      }
    }
  }

  if (const json* num = find(j, "numerics")) {
    opt_number(*num, "trunc_tol", cfg.numerics.trunc_tol);
    opt_int(*num, "max_terms", cfg.numerics.max_terms);
    opt_number(*num, "lattice_eps", cfg.numerics.lattice_eps);
    opt_int(*num, "lattice_cap", cfg.numerics.lattice_cap);
    opt_number(*num, "tol", cfg.numerics.tol);
    opt_int(*num, "max_iter", cfg.numerics.max_iter);
    opt_int(*num, "quad_order", cfg.numerics.quad_order);
    opt_int(*num, "grid_n", cfg.numerics.grid_n);
    opt_int(*num, "phi_samples", cfg.numerics.phi_samples);
    opt_int(*num, "hyp_samples", cfg.numerics.hyp_samples);
  }
  if (const json* out = find(j, "output")) {
    opt_string(*out, "dir", cfg.output.dir);
    opt_string(*out, "format", cfg.output.format);
    opt_int(*out, "eval_points", cfg.output.eval_points);
    if (cfg.output.format != "csv" && cfg.output.format != "json")
      throw ConfigError("output.format", "must be 'csv' or 'json'");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

ProblemSpec RunConfig::to_problem_spec() const {
  if (!(q > 0.0) || !(q < 1.0)) throw ConfigError("problem.q", "must lie strictly inside (0,1)");
  ProblemSpec spec{FracOrder::of(alpha), QParams(q, numerics.trunc_tol, numerics.max_terms)};
  spec.gammas = gammas;
  spec.betas = betas;
  spec.zetas = zetas;
  spec.nu = nu;
  spec.mu = mu;
  spec.measure = measure;
  spec.lambda = lambda;
  spec.quad_order = numerics.quad_order;

  ExprPtr h_expr, f_expr, y_expr;
  try {
    h_expr = parse(h_src);
    check_variables(*h_expr, {"t"});
  } catch (const std::exception& e) {
    throw ConfigError("problem.h", e.what());
  }
  try {
    f_expr = parse(f_src);
    check_variables(*f_expr, {"t", "x"});
  } catch (const std::exception& e) {
    throw ConfigError("problem.f", e.what());
  }
  try {
    y_expr = parse(y_src);
    check_variables(*y_expr, {"ell"});
  } catch (const std::exception& e) {
    throw ConfigError("problem.y_ell", e.what());
  }
  spec.h = [h_expr](double t) { return eval(*h_expr, {{"t", t}}); };
  spec.f = [f_expr](double t, double x) { return eval(*f_expr, {{"t", t}, {"x", x}}); };
  spec.y_ell = [y_expr](double ell) { return eval(*y_expr, {{"ell", ell}}); };

  spec.validate_structure();
  return spec;
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions opt;
  opt.tol = numerics.tol;
  opt.max_iter = numerics.max_iter;
  opt.lattice_eps = numerics.lattice_eps;
  opt.lattice_cap = numerics.lattice_cap;
  return opt;
}

json RunConfig::to_json() const {
  json atoms = json::array();
  for (const auto& [loc, mass] : measure.atoms) atoms.push_back(json::array({loc, mass}));
  return json{
      {"problem",
       {{"alpha", alpha},
        {"q", q},
        {"gammas", gammas},
        {"betas", betas},
        {"zetas", zetas},
        {"nu", nu},
        {"mu", mu},
        {"lambda", lambda},
        {"h", h_src},
        {"f", f_src},
        {"y_ell", y_src},
        {"measure", {{"density", measure.density}, {"atoms", atoms}}}}},
      {"numerics",
       {{"trunc_tol", numerics.trunc_tol},
        {"max_terms", numerics.max_terms},
        {"lattice_eps", numerics.lattice_eps},
        {"lattice_cap", numerics.lattice_cap},
        {"tol", numerics.tol},
        {"max_iter", numerics.max_iter},
        {"quad_order", numerics.quad_order},
        {"grid_n", numerics.grid_n},
        {"phi_samples", numerics.phi_samples},
        {"hyp_samples", numerics.hyp_samples}}},
      {"output",
       {{"dir", output.dir}, {"format", output.format}, {"eval_points", output.eval_points}}}};
}

}  // namespace qgreen
