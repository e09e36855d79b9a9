#include "hilfer/fracops.hpp"

#include <cmath>
#include <stdexcept>

#include "hilfer/quadrature.hpp"
#include "hilfer/specfun.hpp"

namespace hilfer {
namespace {

void check_grid(const SampledFn& f) {
  if (f.values.size() != f.grid.nodes.size()) {
    throw std::invalid_argument("fracops: sample length does not match grid");
  }
}

}  // namespace

TimeGrid TimeGrid::graded(double horizon, int intervals, double grading) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive");
  }
  if (intervals < 2) {
    throw std::invalid_argument("TimeGrid: at least 2 intervals required");
  }
  if (!(grading >= 1.0) || !std::isfinite(grading)) {
    throw std::invalid_argument("TimeGrid: grading must be >= 1");
  }
  TimeGrid grid;
  grid.horizon = horizon;
  grid.intervals = intervals;
  grid.grading = grading;
  grid.nodes.resize(intervals + 1);
  for (int j = 0; j <= intervals; ++j) {
    grid.nodes[j] =
        horizon * std::pow(static_cast<double>(j) / intervals, grading);
  }
  grid.nodes[intervals] = horizon;
  return grid;
}

bool same_mesh(const TimeGrid& a, const TimeGrid& b) {
  return a.horizon == b.horizon && a.intervals == b.intervals &&
         a.grading == b.grading;
}

SampledFn sample(const TimeGrid& grid, const std::function<double(double)>& f,
                 bool singular_origin, double singular_exponent) {
  SampledFn out;
  out.grid = grid;
  out.singular_origin = singular_origin;
  out.singular_exponent = singular_origin ? singular_exponent : 0.0;
  out.values.resize(grid.nodes.size());
  out.values[0] = singular_origin ? 0.0 : f(grid.nodes[0]);
  for (std::size_t j = 1; j < grid.nodes.size(); ++j) {
    out.values[j] = f(grid.nodes[j]);
  }
  return out;
}

SampledFn grid_derivative(const SampledFn& f) {
  check_grid(f);
  const std::vector<double>& t = f.grid.nodes;
  const std::vector<double>& v = f.values;
  const int m = f.grid.intervals;
  SampledFn out;
  out.grid = f.grid;
  out.values.assign(m + 1, 0.0);
  out.singular_origin = f.singular_origin;
  out.singular_exponent =
      f.singular_origin && f.singular_exponent != 0.0 ? f.singular_exponent - 1.0
                                                      : 0.0;

  const auto forward = [&](int j) {
    const double d1 = t[j + 1] - t[j];
    const double d2 = t[j + 2] - t[j];
    return -v[j] * (d1 + d2) / (d1 * d2) + v[j + 1] * d2 / (d1 * (d2 - d1)) -
           v[j + 2] * d1 / (d2 * (d2 - d1));
  };
  const auto centered = [&](int j) {
    const double h1 = t[j] - t[j - 1];
    const double h2 = t[j + 1] - t[j];
    return -v[j - 1] * h2 / (h1 * (h1 + h2)) + v[j] * (h2 - h1) / (h1 * h2) +
           v[j + 1] * h1 / (h2 * (h1 + h2));
  };

  if (!f.singular_origin) out.values[0] = forward(0);
  const int first_interior = f.singular_origin ? 2 : 1;
  if (f.singular_origin && m >= 3) out.values[1] = forward(1);
  for (int j = first_interior; j < m; ++j) out.values[j] = centered(j);
  {
    const double e1 = t[m] - t[m - 1];
    const double e2 = t[m] - t[m - 2];
    out.values[m] = v[m] * (e1 + e2) / (e1 * e2) -
                    v[m - 1] * e2 / (e1 * (e2 - e1)) +
                    v[m - 2] * e1 / (e2 * (e2 - e1));
  }
  return out;
}

SampledFn rl_integral(double order, const SampledFn& f) {
  check_grid(f);
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw std::domain_error("rl_integral: order must be positive");
  }
  const std::vector<double>& t = f.grid.nodes;
  const std::vector<double>& v = f.values;
  const int m = f.grid.intervals;
  const double a = order;
  const double p = f.singular_origin ? f.singular_exponent : 0.0;
  const double recip_gamma = 1.0 / gamma(a);

  SampledFn out;
  out.grid = f.grid;
  out.values.assign(m + 1, 0.0);
  out.singular_origin = f.singular_origin && (a + p <= 0.0);
  out.singular_exponent = out.singular_origin ? a + p : 0.0;

  // Quadrature helpers for the power-corrected panels near the origin.
  QuadRule gj_first;   // weight s^p on the first panel
  QuadRule gl_inner;   // smooth interior panels
  QuadRule gj_last;    // kernel weight (t_j - s)^{a-1} on the final panel
  const bool power_model = f.singular_origin && p != 0.0;
  double beta_first = 0.0;
  if (power_model) {
    gj_first = gauss_jacobi(6, 0.0, p);
    gl_inner = gauss_legendre(6);
    gj_last = gauss_jacobi(6, a - 1.0, 0.0);
    beta_first = gamma(a) * gamma(p + 1.0) / gamma(a + p + 1.0);
  }

  for (int j = 1; j <= m; ++j) {
    const double tj = t[j];
    double acc = 0.0;
    for (int i = 0; i < j; ++i) {
      const double hi = t[i + 1] - t[i];
      if (i == 0 && f.singular_origin) {
        // Model f(s) = f(t_1) (s/t_1)^p on [0, t_1] (p = 0 falls back to a
        // constant extension, handled by the standard branch below).
        if (power_model) {
          const double t1 = t[1];
          if (j == 1) {
            acc += v[1] * std::pow(t1, a) * beta_first;
          } else {
            double panel = 0.0;
            for (std::size_t g = 0; g < gj_first.nodes.size(); ++g) {
              const double s = 0.5 * (gj_first.nodes[g] + 1.0) * t1;
              panel += gj_first.weights[g] * std::pow(tj - s, a - 1.0);
            }
            acc += v[1] * std::pow(0.5 * t1, p + 1.0) / std::pow(t1, p) * panel;
          }
          continue;
        }
        const double big = tj - t[0];
        const double small = tj - t[1];
        const double m0 =
            (std::pow(big, a) - std::pow(small, a)) / a;
        acc += v[1] * m0;
        continue;
      }
      if (power_model) {
        // Interpolate f(s)/s^p linearly; integrate kernel * s^p * linear by
        // Gauss rules (the transformed factor is smooth through the origin).
        const double phi_l = v[i] / std::pow(t[i], p);
        const double phi_r = v[i + 1] / std::pow(t[i + 1], p);
        const double slope = (phi_r - phi_l) / hi;
        const auto model = [&](double s) {
          return std::pow(s, p) * (phi_l + slope * (s - t[i]));
        };
        double panel = 0.0;
        if (i == j - 1) {
          for (std::size_t g = 0; g < gj_last.nodes.size(); ++g) {
            const double s = t[i] + 0.5 * (gj_last.nodes[g] + 1.0) * hi;
            panel += gj_last.weights[g] * model(s);
          }
          acc += std::pow(0.5 * hi, a) * panel;
        } else {
          for (std::size_t g = 0; g < gl_inner.nodes.size(); ++g) {
            const double s = t[i] + 0.5 * (gl_inner.nodes[g] + 1.0) * hi;
            panel += gl_inner.weights[g] * std::pow(tj - s, a - 1.0) * model(s);
          }
          acc += 0.5 * hi * panel;
        }
        continue;
      }
      // Piecewise-linear product integration with exact kernel moments.
      const double big = tj - t[i];
      const double small = tj - t[i + 1];
      const double big_a = std::pow(big, a);
      const double small_a = std::pow(small, a);
      const double m0 = (big_a - small_a) / a;
      const double m1 = big * m0 - (big_a * big - small_a * small) / (a + 1.0);
      const double slope = (v[i + 1] - v[i]) / hi;
      acc += v[i] * m0 + slope * m1;
    }
    out.values[j] = recip_gamma * acc;
  }
  return out;
}

SampledFn rl_derivative(double order, const SampledFn& f) {
  if (!(order > 0.0) || !(order < 1.0)) {
    throw std::domain_error("rl_derivative: order must lie in (0, 1)");
  }
  return grid_derivative(rl_integral(1.0 - order, f));
}

SampledFn caputo_derivative(double order, const SampledFn& f) {
  if (!(order > 0.0) || !(order < 1.0)) {
    throw std::domain_error("caputo_derivative: order must lie in (0, 1)");
  }
  return rl_integral(1.0 - order, grid_derivative(f));
}

SampledFn hilfer_derivative(double order, double type_g, const SampledFn& f) {
  if (!(order > 0.0) || !(order < 1.0)) {
    throw std::domain_error("hilfer_derivative: order must lie in (0, 1)");
  }
  if (!(type_g >= 0.0) || !(type_g <= 1.0)) {
    throw std::domain_error("hilfer_derivative: type must lie in [0, 1]");
  }
  const double inner = (1.0 - order) * (1.0 - type_g);
  const double outer = type_g * (1.0 - order);
  const SampledFn step1 = inner > 0.0 ? rl_integral(inner, f) : f;
  const SampledFn step2 = grid_derivative(step1);
  return outer > 0.0 ? rl_integral(outer, step2) : step2;
}

}  // namespace hilfer
