#ifndef QGREEN_SELFTEST_HPP
#define QGREEN_SELFTEST_HPP

#include <string>
#include <vector>

namespace qgreen::selftest {

struct CheckResult {
  std::string name;
  bool pass = false;
  long cases = 0;
  double worst = 0.0;  // worst error or margin observed
  double tol = 0.0;
  std::string note;
};

CheckResult gamma_recurrence(double trunc_tol = 1e-14);
CheckResult qpower_int_frac_agreement(double trunc_tol = 1e-14);
CheckResult jackson_linearity(double trunc_tol = 1e-14);
CheckResult jackson_positivity(double trunc_tol = 1e-14);
CheckResult jackson_classical_limit(double trunc_tol = 1e-12);
CheckResult jackson_inversion(double trunc_tol = 1e-14);
CheckResult power_rule(double trunc_tol = 1e-14);
CheckResult semigroup(double trunc_tol = 1e-14);
CheckResult rl_inversion(double trunc_tol = 1e-14);
CheckResult caputo_annihilation(double trunc_tol = 1e-14);
CheckResult measure_exactness();
CheckResult measure_kink_split();
CheckResult expr_roundtrip();

std::vector<CheckResult> run_all(double trunc_tol = 1e-14);

}  // namespace qgreen::selftest

#endif
