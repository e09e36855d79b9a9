#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hilfer {

// Accuracy knobs shared by the special-function evaluators.
struct EvalPolicy {
  int series_terms_max = 1200;
  double tail_tolerance = 1e-12;
};

// Thrown when an evaluator cannot reach its accuracy target; carries the
// error bound it could achieve.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_(achieved_bound) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// Gamma function via a Lanczos approximation with reflection for x < 0.5.
// Throws std::domain_error at the poles x = 0, -1, -2, ...
double gamma(double x);

struct MLParams {
  double alpha;
  double beta_ml = 1.0;
};

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the real line,
// alpha in (0, 2], beta > 0. Construction precomputes the coefficient tables;
// evaluation is const and safe to call concurrently.
//
// The evaluator switches on the conditioning parameter m = |z|^(1/alpha)
// (the log of the largest series term): power series for small m, a real
// integral representation in the intermediate zone, and the algebraic
// asymptotic expansion for large m. Supported accuracy on the negative axis
// is ~1e-9 relative away from the branch seams and ~1e-7 at them.
class MittagLeffler {
 public:
  explicit MittagLeffler(MLParams params, EvalPolicy policy = {});
  ~MittagLeffler();
  MittagLeffler(MittagLeffler&&) noexcept;
  MittagLeffler& operator=(MittagLeffler&&) noexcept;

  double operator()(double z) const;
  const MLParams& params() const { return params_; }

  // Single-branch evaluations, exposed so the verification suite can measure
  // seam agreement. eval_integral and eval_asymptotic require z < 0.
  double eval_series(double z) const;
  double eval_integral(double z) const;
  double eval_asymptotic(double z) const;

 private:
  struct Impl;
  MLParams params_;
  EvalPolicy policy_;
  std::unique_ptr<Impl> impl_;
};

double mittag_leffler(MLParams params, double z, const EvalPolicy& policy = {});

// Wright function M_alpha(theta) for alpha in (0,1), theta >= 0: the
// subordination kernel, a probability density on [0, inf). Series for small
// bounded argument, a positive single-integral representation beyond.
double wright_m(double alpha, double theta, const EvalPolicy& policy = {});

// integral_0^inf theta^sigma M_alpha(theta) dtheta, computed by the module's
// own panel quadrature. Equals Gamma(1+sigma)/Gamma(1+alpha*sigma).
double wright_m_moment(double alpha, double sigma, const EvalPolicy& policy = {});

// Absolute defect of the Laplace-transform identity
//   integral_0^inf (alpha/theta^{alpha+1}) e^{-r theta} M_alpha(theta^{-alpha})
//   dtheta = e^{-r^alpha},
// evaluated through the substitution u = theta^{-alpha} (same integral,
// numerically stable form). Step-doubled quadrature; raises accuracy_error
// when the two refinement levels disagree.
double wright_laplace_check(double alpha, double r, const EvalPolicy& policy = {});

}  // namespace hilfer
