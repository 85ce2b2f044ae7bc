#ifndef QGREEN_MEASURE_HPP
#define QGREEN_MEASURE_HPP

#include <utility>
#include <vector>

#include "qgreen/qkernel.hpp"

namespace qgreen {

/// Bounded-variation measure on [0,1]: polynomial density plus finite atoms.
/// Signed densities are allowed; nonnegativity of derived quantities is a
/// hypothesis to check, not an assumption.
struct StieltjesMeasure {
  std::vector<double> density;                    // c0 + c1 t + c2 t^2 + ...
  std::vector<std::pair<double, double>> atoms;   // (location in [0,1], mass)

  void validate() const;
  bool is_zero() const;
  double density_at(double t) const;
};

bool measure_is_zero(const StieltjesMeasure& m);

/// Gauss-Legendre nodes and weights on [-1,1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadRule gauss_legendre(int order);

/// int_0^1 g(t) dLambda(t): the density part by fixed-order Gauss-Legendre on
/// each subinterval between consecutive kink points of g, the atom part as a
/// weighted sum of point evaluations.
double stieltjes_integrate(const RealFn& g, const StieltjesMeasure& m,
                           const std::vector<double>& kinks = {}, int quad_order = 32);

}  // namespace qgreen

#endif
