#include "hilfer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hilfer {
namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// iteration. d holds the diagonal and is replaced by the eigenvalues; e holds
// the subdiagonal in e[0..n-2] and is destroyed.
void tridiagonal_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = 0;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw std::runtime_error("quadrature: QL iteration stalled");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

struct JacobiRecurrence {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[0] is the total weight mass mu0
};

JacobiRecurrence jacobi_recurrence(int n, double a, double b) {
  JacobiRecurrence rec;
  rec.alpha.resize(n);
  rec.beta.resize(n);
  const double ab = a + b;
  rec.alpha[0] = (b - a) / (ab + 2.0);
  rec.beta[0] = std::pow(2.0, ab + 1.0) * std::tgamma(a + 1.0) *
                std::tgamma(b + 1.0) / std::tgamma(ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    rec.alpha[k] = (b * b - a * a) / (t * (t + 2.0));
    if (k == 1) {
      rec.beta[k] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      rec.beta[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) /
                    (t * t * (t + 1.0) * (t - 1.0));
    }
  }
  return rec;
}

}  // namespace

QuadRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature: rule size must be positive");
  if (a <= -1.0 || b <= -1.0) {
    throw std::invalid_argument("quadrature: Jacobi exponents must exceed -1");
  }
  const JacobiRecurrence rec = jacobi_recurrence(n, a, b);
  std::vector<double> d = rec.alpha;
  std::vector<double> e(n - 1);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(rec.beta[k]);
  tridiagonal_eigenvalues(d, e);

  QuadRule rule;
  rule.nodes = d;
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Christoffel function at a Gauss node equals the Gauss weight:
    // w_i = 1 / sum_{k<n} p_k(x_i)^2 with p_k orthonormal.
    const double x = rule.nodes[i];
    double pm1 = 0.0;
    double p0 = 1.0 / std::sqrt(rec.beta[0]);
    double sum = p0 * p0;
    for (int k = 0; k + 1 < n; ++k) {
      const double sb1 = std::sqrt(rec.beta[k + 1]);
      const double p1 = ((x - rec.alpha[k]) * p0 - (k > 0 ? std::sqrt(rec.beta[k]) : 0.0) * pm1) / sb1;
      sum += p1 * p1;
      pm1 = p0;
      p0 = p1;
    }
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

QuadRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

QuadRule mapped(const QuadRule& rule, double lo, double hi) {
  QuadRule out;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  out.nodes.resize(rule.nodes.size());
  out.weights.resize(rule.weights.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes[i] = mid + half * rule.nodes[i];
    out.weights[i] = half * rule.weights[i];
  }
  return out;
}

}  // namespace hilfer
