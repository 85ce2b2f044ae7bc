#ifndef QGREEN_CONFIG_HPP
#define QGREEN_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "qgreen/greenfn.hpp"
#include "qgreen/solver.hpp"

namespace qgreen {

struct NumericsConfig {
  double trunc_tol = 1e-14;
  int max_terms = 10000;
  double lattice_eps = 1e-12;
  int lattice_cap = 200;
  double tol = 1e-10;
  int max_iter = 500;
  int quad_order = 32;
  int grid_n = 100;
  int phi_samples = 201;
  int hyp_samples = 50;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
  int eval_points = 101;
};

/// Everything a run needs, as read from the JSON config file.  Expression
/// fields stay as source text so the resolved config can be echoed verbatim.
struct RunConfig {
  double alpha = 0;
  double q = 0;
  std::vector<double> gammas, betas, zetas;
  double nu = 1.0, mu = 0.0, lambda = 1.0;
  std::string h_src, f_src, y_src;
  StieltjesMeasure measure;
  NumericsConfig numerics;
  OutputConfig output;

  ProblemSpec to_problem_spec() const;
  SolveOptions solve_options() const;
  nlohmann::json to_json() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Fits a polynomial (degree <= 20) to a density expression in t; throws
// ConfigError if the expression is not polynomial to within 1e-9.
std::vector<double> fit_polynomial_density(const std::string& src);

}  // namespace qgreen

#endif
