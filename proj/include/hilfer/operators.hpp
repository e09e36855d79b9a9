#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "hilfer/fracops.hpp"
#include "hilfer/specfun.hpp"

namespace hilfer {

// Order/type/sector triple plus the time horizon. Every kernel exponent in
// the library is derived from these four numbers.
struct FracParams {
  double alpha = 0.75;
  double gamma_type = 0.5;
  double beta_sect = -0.5;
  double horizon_T = 1.0;

  // Exponent of the weighted solution space, (1 + alpha*beta)(1 - gamma).
  double weight_exponent() const {
    return (1.0 + alpha * beta_sect) * (1.0 - gamma_type);
  }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Positive diagonal operator in the Dirichlet sine basis on [0, pi].
struct DiagonalSectorialOperator {
  int mode_count = 0;
  std::vector<double> eigenvalues;

  static DiagonalSectorialOperator dirichlet_laplacian(int n_modes,
                                                       double shift = 0.0);
  void validate() const;
};

// Spatial state as coefficients against phi_n(y) = sin(n y), n = 1..N.
struct SpectralField {
  std::vector<double> coefficients;

  static SpectralField zero(std::size_t n) {
    SpectralField f;
    f.coefficients.assign(n, 0.0);
    return f;
  }
  std::size_t size() const { return coefficients.size(); }
  double l2_norm() const;
};

enum class Family { semigroup, s_alpha, t_alpha, r_alpha, s_alpha_gamma, resolvent };
enum class Path { direct, subordination };

const char* family_name(Family family);

// Panel Gauss-Legendre discretization of the subordination integrals
// int M_a(theta) Q(t^a theta) dtheta and int a theta M_a(theta) Q(...) dtheta,
// truncated where the Wright tail drops below 1e-19.
struct SubordinationRule {
  std::vector<double> theta;
  std::vector<double> weight_s;  // quadrature weight * M_a(theta)
  std::vector<double> weight_t;  // quadrature weight * a * theta * M_a(theta)

  static SubordinationRule build(double alpha, const EvalPolicy& policy = {});
  double s_multiplier(double x) const;  // x = lambda * t^alpha
  double t_multiplier(double x) const;
};

// Scalar mode multiplier of one operator family at eigenvalue lambda >= 0.
// Holds the per-family Mittag-Leffler (or subordination) tables, so reuse one
// evaluator across many (lambda, t) pairs.
class FamilyEvaluator {
 public:
  FamilyEvaluator(const FracParams& params, Family family, Path path,
                  const EvalPolicy& policy = {});
  FamilyEvaluator(FamilyEvaluator&&) noexcept;
  FamilyEvaluator& operator=(FamilyEvaluator&&) noexcept;
  ~FamilyEvaluator();

  double operator()(double lambda, double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double family_multiplier(const FracParams& params, Family family,
                         double lambda, double t, Path path = Path::direct,
                         const EvalPolicy& policy = {});

SpectralField semigroup_apply(const DiagonalSectorialOperator& op, double t,
                              const SpectralField& x);
SpectralField t_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path = Path::direct);
SpectralField s_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path = Path::direct);
SpectralField r_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path = Path::direct);
SpectralField s_alpha_gamma_apply(const FracParams& params,
                                  const DiagonalSectorialOperator& op,
                                  double t, const SpectralField& x);

// Mesh-based evaluation of the same multiplier by fractional integration of
// order gamma(1-alpha) applied to sampled t^{alpha-1} E_{a,a}(-lambda t^a).
// Node 0 follows the SampledFn singular-origin convention.
SampledFn s_alpha_gamma_multiplier_quadrature(const FracParams& params,
                                              double lambda,
                                              const TimeGrid& grid,
                                              const EvalPolicy& policy = {});

struct BoundProbeReport {
  Family family = Family::resolvent;
  double exponent_expected = 0.0;
  double constant_fitted = 0.0;
  // Signed slack max over the sample of (measured - fitted * scale); the
  // inequality holds when this is <= 0 up to rounding.
  double max_violation = 0.0;
};

BoundProbeReport resolvent_probe(const DiagonalSectorialOperator& op,
                                 const std::vector<std::complex<double>>& z_samples,
                                 double beta_sect);
BoundProbeReport norm_bound_probe(const FracParams& params,
                                  const DiagonalSectorialOperator& op,
                                  Family family,
                                  const std::vector<double>& t_samples);

struct ContinuityReport {
  std::vector<double> pair_defects;
  double max_defect = 0.0;
};

ContinuityReport strong_continuity_probe(
    const FracParams& params, const DiagonalSectorialOperator& op,
    Family family, const SpectralField& x,
    const std::vector<std::pair<double, double>>& t_pairs);

}  // namespace hilfer
