#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hilfer/solver.hpp"

namespace hilfer {

inline constexpr char kHilferVersion[] = "1.0.0";

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key-value scenario (TOML-compatible sections). problem.kind selects
// the built-in nonlinearity set: "sec5" is the reaction term
// g = y cos(u) + bu with memory f = sin(u) against kernel e^{-(t-s)};
// "linear" drops g, f and the nonlocal term entirely.
struct Scenario {
  double alpha = 0.75;
  double gamma_type = 0.5;
  double beta_sect = -0.5;
  double horizon = 1.0;
  int modes = 32;
  double shift = 0.0;
  int nodes = 200;
  double grading = 3.0;
  int max_iterations = 50;
  double tolerance = 1e-8;
  double relaxation = 0.8;
  double radius_r = 6.0;
  int quadrature_order = 6;
  std::string linear_path = "direct";  // direct | quadrature
  std::string kind = "sec5";           // sec5 | linear
  std::vector<double> initial_coeffs{1.0};
  std::vector<double> nonlocal_times;
  std::vector<double> nonlocal_weights;
  double k1 = 0.0;
  double k2 = 0.0;
  double delta_decay = 1.0;
  double k_bound_h3 = 0.2;
  int output_points = 64;
  std::string csv_name = "trajectory.csv";
};

// Accepts a file path or a builtin name ("example-sec5", "linear"). Parse
// errors carry the line number; all validation violations are aggregated
// into a single config_error.
Scenario load_scenario(const std::string& path_or_builtin);
Scenario parse_scenario_text(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);
std::string scenario_hash(const Scenario& scenario);

ProblemSpec make_problem(const Scenario& scenario);
SolverConfig make_solver_config(const Scenario& scenario);

struct RunArtifact {
  std::string csv_path;
  std::string report_path;
  std::string config_hash;
  bool under_resolved = false;
  ResidualReport report;
};

RunArtifact run_scenario(const Scenario& scenario, const std::string& out_dir);

struct CheckResult {
  std::string name;
  bool pass = false;
  double slack = 0.0;  // tolerance minus measured defect; >= 0 passes
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int failures = 0;
  std::string text() const;
};

VerifyReport verify_suite(const std::string& suite);

struct ConvergeRow {
  int nodes = 0;
  double value = 0.0;
};

struct ConvergeTable {
  bool linear = false;
  std::vector<ConvergeRow> rows;
  std::vector<double> orders;  // log2(value_i / value_{i+1})
  std::string text() const;
};

// Doubles the mesh per level. Linear scenarios report the weighted error
// against the closed-form solution and always exercise the mesh-dependent
// quadrature path (the direct path has no mesh error to measure); other
// scenarios report the Volterra residual.
ConvergeTable converge_study(const Scenario& scenario, int levels);

}  // namespace hilfer
