#pragma once

#include <cstddef>
#include <vector>

namespace hilfer {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1.
QuadRule gauss_jacobi(int n, double a, double b);

// Maps a rule on [-1, 1] to [lo, hi]; weights scale by (hi-lo)/2.
QuadRule mapped(const QuadRule& rule, double lo, double hi);

// Integrates f over [lo, hi] with `panels` equal panels of the given base rule.
template <typename F>
double panel_integrate(F&& f, double lo, double hi, int panels,
                       const QuadRule& base) {
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      sum += half * base.weights[i] * f(mid + half * base.nodes[i]);
    }
  }
  return sum;
}

}  // namespace hilfer
