#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "hilfer/fracops.hpp"
#include "hilfer/specfun.hpp"
#include "reference_values.hpp"

using hilfer::SampledFn;
using hilfer::TimeGrid;
namespace ref = hilfer::ref;

namespace {

double max_rel_err(const SampledFn& got, const std::function<double(double)>& want,
                   int first_node = 1) {
  double worst = 0.0;
  for (int j = first_node; j < got.grid.node_count(); ++j) {
    const double t = got.grid.nodes[j];
    const double w = want(t);
    const double err = std::fabs(got.values[j] - w) / std::max(1.0, std::fabs(w));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

TEST_CASE("graded mesh has exact endpoints and the declared law") {
  const TimeGrid grid = TimeGrid::graded(2.0, 50, 3.0);
  CHECK(grid.node_count() == 51);
  CHECK(grid.nodes.front() == 0.0);
  CHECK(grid.nodes.back() == 2.0);
  for (int j = 1; j < 50; ++j) {
    const double expected = 2.0 * std::pow(j / 50.0, 3.0);
    CHECK(grid.nodes[j] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(grid.nodes[j] > grid.nodes[j - 1]);
  }
  CHECK(hilfer::same_mesh(grid, TimeGrid::graded(2.0, 50, 3.0)));
  CHECK_FALSE(hilfer::same_mesh(grid, TimeGrid::graded(2.0, 50, 2.0)));
}

TEST_CASE("graded mesh rejects bad parameters") {
  CHECK_THROWS_AS(TimeGrid::graded(0.0, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::graded(-1.0, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::graded(1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::graded(1.0, 10, 0.5), std::invalid_argument);
}

TEST_CASE("sampling a singular function zeroes the origin slot") {
  const TimeGrid grid = TimeGrid::graded(1.0, 10, 2.0);
  const SampledFn f = hilfer::sample(
      grid, [](double t) { return std::pow(t, -0.5); }, true, -0.5);
  CHECK(f.singular_origin);
  CHECK(f.singular_exponent == -0.5);
  CHECK(f.values[0] == 0.0);
  CHECK(f.values[1] == doctest::Approx(std::pow(grid.nodes[1], -0.5)));
  const SampledFn g = hilfer::sample(grid, [](double t) { return t; });
  CHECK_FALSE(g.singular_origin);
  CHECK(g.values[0] == 0.0);
}

TEST_CASE("fractional integral of a power matches the gamma-ratio law") {
  // I^a t^p = Gamma(p+1)/Gamma(p+a+1) t^{p+a}
  const TimeGrid grid = TimeGrid::graded(1.0, 200, 2.0);
  struct Case {
    double a, p;
  };
  for (const Case c : {Case{0.75, 1.5}, Case{0.5, 0.5}, Case{0.3, 2.0}}) {
    const SampledFn f = hilfer::sample(
        grid, [&](double t) { return std::pow(t, c.p); }, false, c.p);
    const SampledFn out = hilfer::rl_integral(c.a, f);
    const double coef = hilfer::gamma(c.p + 1.0) / hilfer::gamma(c.p + c.a + 1.0);
    const double err = max_rel_err(
        out, [&](double t) { return coef * std::pow(t, c.p + c.a); });
    CHECK(err <= 5e-5);
  }
}

TEST_CASE("fractional integral handles a declared singular power") {
  // I^{0.5} t^{-0.5} = Gamma(0.5) / Gamma(1) = sqrt(pi), constant in t
  const TimeGrid grid = TimeGrid::graded(1.0, 100, 2.0);
  const SampledFn f = hilfer::sample(
      grid, [](double t) { return std::pow(t, -0.5); }, true, -0.5);
  const SampledFn out = hilfer::rl_integral(0.5, f);
  // the output power a+p = 0 does not vanish at the origin, so node 0 stays
  // a flagged placeholder
  CHECK(out.singular_origin);
  const double err =
      max_rel_err(out, [](double) { return ref::kGammaHalf; });
  CHECK(err <= 1e-6);
}

TEST_CASE("fractional integral converges at second order on smooth data") {
  const auto run = [](int m) {
    const TimeGrid grid = TimeGrid::graded(1.0, m, 2.0);
    const SampledFn f = hilfer::sample(grid, [](double t) { return t * t; });
    const SampledFn out = hilfer::rl_integral(0.75, f);
    const double coef = 2.0 / hilfer::gamma(3.75);
    return max_rel_err(out,
                       [&](double t) { return coef * std::pow(t, 2.75); });
  };
  const double coarse = run(50);
  const double fine = run(100);
  const double order = std::log2(coarse / fine);
  CHECK(order >= 1.5);
}

TEST_CASE("rl_derivative inverts rl_integral away from the origin") {
  const TimeGrid grid = TimeGrid::graded(1.0, 200, 2.0);
  const SampledFn f =
      hilfer::sample(grid, [](double t) { return std::cos(2.0 * t); });
  const SampledFn round = hilfer::rl_derivative(0.6, hilfer::rl_integral(0.6, f));
  double worst = 0.0;
  for (int j = 10; j < 190; ++j) {
    worst = std::max(worst, std::fabs(round.values[j] - f.values[j]));
  }
  CHECK(worst <= 5e-3);
}

TEST_CASE("hilfer derivative collapses to the classical types bitwise") {
  const TimeGrid grid = TimeGrid::graded(1.0, 80, 2.0);
  const SampledFn f =
      hilfer::sample(grid, [](double t) { return t + 0.5 * t * t; });
  const SampledFn rl = hilfer::rl_derivative(0.75, f);
  const SampledFn h0 = hilfer::hilfer_derivative(0.75, 0.0, f);
  const SampledFn cap = hilfer::caputo_derivative(0.75, f);
  const SampledFn h1 = hilfer::hilfer_derivative(0.75, 1.0, f);
  REQUIRE(h0.values.size() == rl.values.size());
  REQUIRE(h1.values.size() == cap.values.size());
  CHECK(std::memcmp(h0.values.data(), rl.values.data(),
                    rl.values.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(h1.values.data(), cap.values.data(),
                    cap.values.size() * sizeof(double)) == 0);
}

TEST_CASE("hilfer derivative annihilates its own homogeneous mode") {
  // D^{a,g} t^{(1-a)(g-1)} = 0: the inner integral I^{(1-a)(1-g)} lifts the
  // power to a constant, whose derivative vanishes. A uniform mesh keeps the
  // finite differences well conditioned near the origin.
  const double a = 0.75;
  const double g = 0.5;
  const double p = (1.0 - a) * (g - 1.0);
  const TimeGrid grid = TimeGrid::graded(1.0, 200, 1.0);
  const SampledFn f = hilfer::sample(
      grid, [&](double t) { return std::pow(t, p); }, true, p);
  const SampledFn out = hilfer::hilfer_derivative(a, g, f);
  double worst = 0.0;
  for (int j = 4; j < out.grid.node_count(); ++j) {
    worst = std::max(worst, std::fabs(out.values[j]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("riemann-liouville derivative annihilates t^{a-1}") {
  const TimeGrid grid = TimeGrid::graded(1.0, 200, 1.0);
  const SampledFn f = hilfer::sample(
      grid, [](double t) { return std::pow(t, -0.5); }, true, -0.5);
  const SampledFn out = hilfer::rl_derivative(0.5, f);
  double worst = 0.0;
  for (int j = 4; j < out.grid.node_count(); ++j) {
    worst = std::max(worst, std::fabs(out.values[j]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("fractional integrals compose by order addition") {
  const TimeGrid grid = TimeGrid::graded(1.0, 200, 2.0);
  const SampledFn f =
      hilfer::sample(grid, [](double t) { return std::sin(3.0 * t); });
  const SampledFn twice = hilfer::rl_integral(0.3, hilfer::rl_integral(0.7, f));
  const SampledFn once = hilfer::rl_integral(1.0, f);
  double worst = 0.0;
  for (int j = 0; j < grid.node_count(); ++j) {
    worst = std::max(worst, std::fabs(twice.values[j] - once.values[j]));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("operators validate their order arguments") {
  const TimeGrid grid = TimeGrid::graded(1.0, 10, 1.0);
  const SampledFn f = hilfer::sample(grid, [](double t) { return t; });
  CHECK_THROWS_AS(hilfer::rl_integral(0.0, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::rl_integral(-0.5, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::rl_derivative(1.0, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::caputo_derivative(0.0, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::hilfer_derivative(1.5, 0.5, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::hilfer_derivative(0.5, -0.1, f), std::domain_error);
  CHECK_THROWS_AS(hilfer::hilfer_derivative(0.5, 1.1, f), std::domain_error);
}

TEST_CASE("sample rejects mismatched explicit data") {
  const TimeGrid grid = TimeGrid::graded(1.0, 10, 1.0);
  SampledFn f = hilfer::sample(grid, [](double t) { return t; });
  f.values.pop_back();
  CHECK_THROWS_AS(hilfer::rl_integral(0.5, f), std::invalid_argument);
}
