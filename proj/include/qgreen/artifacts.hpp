#ifndef QGREEN_ARTIFACTS_HPP
#define QGREEN_ARTIFACTS_HPP

#include <string>

#include <json.hpp>

#include "qgreen/config.hpp"
#include "qgreen/verify.hpp"

namespace qgreen {

// Shortest round-trip decimal form; locale independent.
std::string fmt_double(double v);

void write_text_file(const std::string& path, const std::string& content);

// t, x, p, x/p at `eval_points` uniform abscissae merged with all lattice
// nodes, ascending in t.  format: "csv" or "json".
std::string solution_table(const QGridFunction& x, const GreenEvaluator& green,
                           int eval_points, const std::string& format);

std::string iteration_trace(const SolveReport& rep, const std::string& format);

nlohmann::json to_json(const GreenConstants& gc);
nlohmann::json to_json(const HypothesisReport& rep);
nlohmann::json to_json(const ResidualReport& rep);
nlohmann::json to_json(const FHypothesisReport& rep);
nlohmann::json to_json(const GreenPropertyReport& rep);
nlohmann::json solve_report_json(const SolveReport& rep);
nlohmann::json sweep_report_json(const SweepReport& rep);

}  // namespace qgreen

#endif
