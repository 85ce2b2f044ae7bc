#include "qgreen/measure.hpp"

#include <algorithm>
#include <cmath>

namespace qgreen {

void StieltjesMeasure::validate() const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double loc = atoms[i].first;
    if (loc < 0.0 || loc > 1.0)
      throw DomainError("StieltjesMeasure: atom location outside [0,1]");
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[j].first == loc)
        throw DomainError("StieltjesMeasure: duplicate atom location");
  }
}

bool StieltjesMeasure::is_zero() const {
  for (double c : density)
    if (c != 0.0) return false;
  for (const auto& [loc, mass] : atoms) {
    (void)loc;
    if (mass != 0.0) return false;
  }
  return true;
}

double StieltjesMeasure::density_at(double t) const {
  double acc = 0.0;
  for (std::size_t j = density.size(); j-- > 0;) acc = acc * t + density[j];
  return acc;
}

bool measure_is_zero(const StieltjesMeasure& m) { return m.is_zero(); }

QuadRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  QuadRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root.
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  return rule;
}

double stieltjes_integrate(const RealFn& g, const StieltjesMeasure& m,
                           const std::vector<double>& kinks, int quad_order) {
  m.validate();
  double total = 0.0;

  bool density_nonzero = false;
  for (double c : m.density)
    if (c != 0.0) density_nonzero = true;

  if (density_nonzero) {
    std::vector<double> cuts{0.0, 1.0};
    for (double k : kinks)
      if (k > 0.0 && k < 1.0) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const QuadRule rule = gauss_legendre(quad_order);
    for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
      const double a = cuts[piece], b = cuts[piece + 1];
      const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
      double acc = 0.0;
      for (int i = 0; i < quad_order; ++i) {
        const double t = mid + halfw * rule.nodes[i];
        acc += rule.weights[i] * g(t) * m.density_at(t);
      }
      total += halfw * acc;
    }
  }

  for (const auto& [loc, mass] : m.atoms)
    if (mass != 0.0) total += mass * g(loc);

  return total;
}

}  // namespace qgreen
