#pragma once

#include <functional>
#include <vector>

namespace hilfer {

// Graded time mesh t_j = T (j/M)^q, j = 0..M.
struct TimeGrid {
  double horizon = 1.0;
  int intervals = 2;  // M; node count is M+1
  double grading = 1.0;
  std::vector<double> nodes;

  static TimeGrid graded(double horizon, int intervals, double grading);
  int node_count() const { return static_cast<int>(nodes.size()); }
};

bool same_mesh(const TimeGrid& a, const TimeGrid& b);

// A scalar function restricted to a grid. When the function blows up at t=0
// the node-0 value is carried but flagged; singular_exponent records the
// leading power f(t) ~ c t^p (p < 0) so the weakly singular quadrature can
// model the first few panels instead of interpolating across the blow-up.
struct SampledFn {
  TimeGrid grid;
  std::vector<double> values;
  bool singular_origin = false;
  double singular_exponent = 0.0;
};

SampledFn sample(const TimeGrid& grid, const std::function<double(double)>& f,
                 bool singular_origin = false, double singular_exponent = 0.0);

// Three-point finite differences on the graded mesh (centered inside,
// one-sided at the ends). A singular origin is propagated, not differenced.
SampledFn grid_derivative(const SampledFn& f);

// Riemann-Liouville integral (1/Gamma(a)) int_0^t (t-s)^{a-1} f(s) ds by
// product integration: f piecewise linear per subinterval with the kernel
// moments in closed form. order > 0.
SampledFn rl_integral(double order, const SampledFn& f);

// Riemann-Liouville derivative, order in (0,1): grid derivative of
// rl_integral(1-order, f).
SampledFn rl_derivative(double order, const SampledFn& f);

// Caputo derivative, order in (0,1): rl_integral(1-order, grid derivative).
SampledFn caputo_derivative(double order, const SampledFn& f);

// Hilfer derivative of order a in (0,1) and type g in [0,1]:
// I^{g(1-a)} . D . I^{(1-a)(1-g)}. Zero-order inner/outer integrals are
// skipped exactly, so type 0 and type 1 reproduce the Riemann-Liouville and
// Caputo compositions bit for bit.
SampledFn hilfer_derivative(double order, double type_g, const SampledFn& f);

}  // namespace hilfer
