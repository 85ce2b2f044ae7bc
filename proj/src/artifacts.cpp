#include "qgreen/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace qgreen {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("", "cannot write file '" + path + "'");
  out << content;
}

std::string solution_table(const QGridFunction& x, const GreenEvaluator& green,
                           int eval_points, const std::string& format) {
  std::vector<double> ts;
  for (int i = 0; i < eval_points; ++i)
    ts.push_back(eval_points == 1 ? 0.0 : static_cast<double>(i) / (eval_points - 1));
  for (double node : x.lattice.nodes) ts.push_back(node);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  const GreenConstants& gc = green.constants();
  auto pval = [&](double t) { return (t + gc.cshift) / gc.sigma; };

  if (format == "json") {
    json rows = json::array();
    for (double t : ts) {
      const double xv = x(t), pv = pval(t);
      json row{{"t", t}, {"x", xv}, {"p", pv}};
      if (pv > 0.0)
        row["ratio"] = xv / pv;
      else
        row["ratio"] = nullptr;
      rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
  }
  std::string out = "t,x,p,ratio\n";
  for (double t : ts) {
    const double xv = x(t), pv = pval(t);
    out += fmt_double(t) + "," + fmt_double(xv) + "," + fmt_double(pv) + ",";
    if (pv > 0.0) out += fmt_double(xv / pv);
    out += "\n";
  }
  return out;
}

std::string iteration_trace(const SolveReport& rep, const std::string& format) {
  if (format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < rep.sup_changes.size(); ++i)
      rows.push_back(json{{"n", i + 1}, {"sup_change", rep.sup_changes[i]}});
    return rows.dump(2) + "\n";
  }
  std::string out = "n,sup_change\n";
  for (std::size_t i = 0; i < rep.sup_changes.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt_double(rep.sup_changes[i]) + "\n";
  return out;
}

json to_json(const GreenConstants& gc) {
  return json{{"delta", gc.delta}, {"cshift", gc.cshift}, {"sigma", gc.sigma},
              {"B", gc.B},         {"rho", gc.rho},       {"Phat", gc.Phat},
              {"Ptilde", gc.Ptilde}};
}

json to_json(const HypothesisReport& rep) {
  return json{{"constants", to_json(rep.constants)},
              {"rho_positive", rep.rho_positive},
              {"B_nonneg", rep.B_nonneg},
              {"phi_nonneg", rep.phi_nonneg},
              {"phi_min_sampled", rep.phi_min_sampled},
              {"psi1_min_sampled", rep.psi1_min_sampled},
              {"samples", rep.samples},
              {"check_tol", rep.check_tol},
              {"pass", rep.pass()}};
}

json to_json(const ResidualReport& rep) {
  return json{{"ode_residual_sup", rep.ode_residual_sup},
              {"bc0_residual", rep.bc0_residual},
              {"bc_der_residuals", rep.bc_der_residuals},
              {"bc_mixed_residual", rep.bc_mixed_residual},
              {"forcing_sup", rep.forcing_sup}};
}

json to_json(const FHypothesisReport& rep) {
  return json{{"samples", rep.samples},
              {"x_max", rep.x_max},
              {"f_negative", rep.f_negative},
              {"h_negative", rep.h_negative},
              {"f_not_increasing", rep.f_not_increasing},
              {"y_out_of_range", rep.y_out_of_range},
              {"scaling_violations", rep.scaling_violations},
              {"f_at_zero_nonzero", rep.f_at_zero_nonzero},
              {"h_nonzero", rep.h_nonzero},
              {"worst_scaling_margin", rep.worst_scaling_margin},
              {"pass", rep.pass()}};
}

json to_json(const GreenPropertyReport& rep) {
  return json{{"grid_n", rep.grid_n},
              {"min_H1", rep.min_H1},
              {"min_H2", rep.min_H2},
              {"min_H3", rep.min_H3},
              {"margin_i_upper", rep.margin_i_upper},
              {"margin_ii_lower", rep.margin_ii_lower},
              {"margin_ii_upper", rep.margin_ii_upper},
              {"margin_iii_lower", rep.margin_iii_lower},
              {"margin_iii_upper", rep.margin_iii_upper},
              {"worst", rep.worst()},
              {"worst_t", rep.worst_t},
              {"worst_tau", rep.worst_tau}};
}

json solve_report_json(const SolveReport& rep) {
  json j{{"converged", rep.converged},
         {"n_iters", rep.n_iters},
         {"sup_norm", rep.sup_norm},
         {"cone_certificate", {{"mu_hat", rep.mu_hat}, {"nu_hat", rep.nu_hat}}},
         {"fixed_point_residual", rep.fixed_point_residual},
         {"last_sup_change", rep.sup_changes.empty() ? 0.0 : rep.sup_changes.back()}};
  if (rep.residuals) j["residuals"] = to_json(*rep.residuals);
  return j;
}

json sweep_report_json(const SweepReport& rep) {
  json rows = json::array();
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    rows.push_back(json{{"lambda", rep.lambdas[i]},
                        {"sup_norm", rep.reports[i].sup_norm},
                        {"converged", rep.reports[i].converged},
                        {"n_iters", rep.reports[i].n_iters}});
  }
  return json{{"entries", rows},
              {"pointwise_ordered", rep.pointwise_ordered},
              {"norms_increasing", rep.norms_increasing},
              {"violations", rep.violations}};
}

}  // namespace qgreen
