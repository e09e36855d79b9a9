#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hilfer/fracops.hpp"
#include "hilfer/operators.hpp"

namespace hilfer {

// Constants of the forcing growth bound k1 + k2 exp(-delta t) and of the
// nonlocal-term bound used by the hypothesis audits.
struct GrowthBounds {
  double k1 = 0.0;
  double k2 = 0.0;
  double delta_decay = 1.0;
  double h_bound = 0.0;
};

// Full problem data. Nonlinearities act pointwise in physical space: fields
// are synthesized at 2N equispaced interior points of (0, pi), composed, and
// projected back onto the sine modes. Null g/f stand for identically zero.
struct ProblemSpec {
  FracParams params;
  DiagonalSectorialOperator op;
  TimeGrid grid;
  SpectralField u0;
  std::function<double(double t, double y, double u, double bu)> g;
  std::function<double(double t, double y, double u)> f;
  std::function<double(double t, double s)> kernel_k;
  std::vector<double> nonlocal_times;
  std::vector<double> nonlocal_weights;
  GrowthBounds bounds;

  void validate() const;
};

// Time-indexed states on the grid. Node 0 stores the weighted limit of
// t^w u(t) (zero field for gamma < 1, u0 - h(u) for gamma = 1); nodes j >= 1
// store u(t_j) itself, with weight_exponent recording w = (1+ab)(1-g).
struct Trajectory {
  TimeGrid grid;
  std::vector<SpectralField> states;
  double weight_exponent = 0.0;

  double weighted_norm() const;
};

double weighted_distance(const Trajectory& a, const Trajectory& b);

enum class LinearTermPath { direct, quadrature };

struct SolverConfig {
  int max_iterations = 50;
  double tolerance = 1e-8;
  double relaxation = 0.8;
  int quadrature_order = 6;
  double radius_r = 6.0;
  // 0 reads HILFER_THREADS (default 1); parallel schedules are fixed so
  // results are byte-identical across thread counts.
  int threads = 0;
  LinearTermPath linear_term_path = LinearTermPath::direct;

  void validate() const;
};

struct HypothesisChecks {
  bool h2_pass = false;
  double h2_slack = 0.0;
  bool h3_pass = false;
  double h3_slack = 0.0;
  bool h4_pass = false;
  double h4_required_radius = 0.0;
};

struct ResidualReport {
  int iterations_used = 0;
  bool converged = false;
  double final_update_norm = 0.0;
  double volterra_residual_weighted = 0.0;
  double mild_self_consistency = 0.0;
  HypothesisChecks hypothesis_checks;
  bool omega_r_maintained = true;
  double modal_tail = 0.0;
  double snap_error = 0.0;
  std::vector<double> update_history;
};

class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// Fixed-point map P u = S_{a,g}(t)[u0 - h(u)] + int_0^t (t-r)^{a-1}
// T_a(t-r) g(r, u, Bu) dr with per-mode product-integration convolution
// weights cached for the grid; reuse one instance for repeated applications.
class PicardOperator {
 public:
  explicit PicardOperator(const ProblemSpec& spec,
                          const SolverConfig& config = {});
  PicardOperator(PicardOperator&&) noexcept;
  PicardOperator& operator=(PicardOperator&&) noexcept;
  ~PicardOperator();

  Trajectory apply(const Trajectory& u) const;
  Trajectory initial_trajectory() const;
  SpectralField nonlocal_field(const Trajectory& u) const;
  double snap_error() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SpectralField b_term(const ProblemSpec& spec, const Trajectory& traj,
                     int t_index);
SpectralField nonlocal_h(const ProblemSpec& spec, const Trajectory& traj);
Trajectory picard_map(const ProblemSpec& spec, const Trajectory& traj,
                      const SolverConfig& config = {});
std::pair<Trajectory, ResidualReport> solve(const ProblemSpec& spec,
                                            const SolverConfig& config = {});
double volterra_residual(const ProblemSpec& spec, const Trajectory& traj);

struct DefectTable {
  std::vector<double> gaps;
  std::vector<double> max_defects;
  std::vector<double> origin_defects;
};

DefectTable equicontinuity_probe(const ProblemSpec& spec,
                                 const std::vector<Trajectory>& traj_samples,
                                 const std::vector<double>& gap_buckets);
Trajectory random_ball_trajectory(const ProblemSpec& spec, double radius,
                                  unsigned seed);

struct ContractionSequence {
  std::vector<double> values;
  std::vector<double> log_values;
  std::optional<int> n0;
};

ContractionSequence mnc_contraction_sequence(const FracParams& params,
                                             double c_p, double k_lip,
                                             int n_max);

}  // namespace hilfer
