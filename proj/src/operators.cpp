#include "hilfer/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hilfer/quadrature.hpp"

namespace hilfer {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSubordinationExponentCut = 45.0;
constexpr double kSubordinationPanelWidth = 0.5;
constexpr int kSubordinationPanelOrder = 16;

void check_mode_compat(const DiagonalSectorialOperator& op,
                       const SpectralField& x) {
  if (x.size() != static_cast<std::size_t>(op.mode_count)) {
    throw std::invalid_argument("operators: field size does not match mode count");
  }
}

}  // namespace

void FracParams::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("FracParams: alpha must lie in (0, 1)");
  }
  if (!(gamma_type >= 0.0) || !(gamma_type <= 1.0)) {
    throw std::invalid_argument("FracParams: gamma_type must lie in [0, 1]");
  }
  if (!(beta_sect > -1.0) || !(beta_sect < 0.0)) {
    throw std::invalid_argument("FracParams: beta_sect must lie in (-1, 0)");
  }
  if (!(horizon_T > 0.0) || !std::isfinite(horizon_T)) {
    throw std::invalid_argument("FracParams: horizon_T must be positive");
  }
}

DiagonalSectorialOperator DiagonalSectorialOperator::dirichlet_laplacian(
    int n_modes, double shift) {
  if (n_modes < 1) {
    throw std::invalid_argument("DiagonalSectorialOperator: need at least one mode");
  }
  if (!(shift >= 0.0)) {
    throw std::invalid_argument("DiagonalSectorialOperator: shift must be >= 0");
  }
  DiagonalSectorialOperator op;
  op.mode_count = n_modes;
  op.eigenvalues.resize(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    op.eigenvalues[n - 1] = static_cast<double>(n) * n + shift;
  }
  return op;
}

void DiagonalSectorialOperator::validate() const {
  if (mode_count < 1 ||
      eigenvalues.size() != static_cast<std::size_t>(mode_count)) {
    throw std::invalid_argument("DiagonalSectorialOperator: inconsistent mode count");
  }
  double prev = 0.0;
  for (double lambda : eigenvalues) {
    if (!(lambda > prev)) {
      throw std::invalid_argument(
          "DiagonalSectorialOperator: eigenvalues must be positive and increasing");
    }
    prev = lambda;
  }
}

double SpectralField::l2_norm() const {
  double sum = 0.0;
  for (double c : coefficients) sum += c * c;
  return std::sqrt(0.5 * kPi * sum);
}

const char* family_name(Family family) {
  switch (family) {
    case Family::semigroup: return "semigroup";
    case Family::s_alpha: return "s_alpha";
    case Family::t_alpha: return "t_alpha";
    case Family::r_alpha: return "r_alpha";
    case Family::s_alpha_gamma: return "s_alpha_gamma";
    case Family::resolvent: return "resolvent";
  }
  return "unknown";
}

SubordinationRule SubordinationRule::build(double alpha,
                                           const EvalPolicy& policy) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("SubordinationRule: alpha must lie in (0, 1)");
  }
  const double b =
      (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
  const double theta_max =
      std::pow(kSubordinationExponentCut / b, 1.0 - alpha);
  const int panels =
      std::max(1, static_cast<int>(std::ceil(theta_max / kSubordinationPanelWidth)));
  const QuadRule base = gauss_legendre(kSubordinationPanelOrder);

  SubordinationRule rule;
  rule.theta.reserve(static_cast<std::size_t>(panels) * base.nodes.size());
  rule.weight_s.reserve(rule.theta.capacity());
  rule.weight_t.reserve(rule.theta.capacity());
  for (int p = 0; p < panels; ++p) {
    const double lo = p * kSubordinationPanelWidth;
    const double hi = std::min(theta_max, lo + kSubordinationPanelWidth);
    const QuadRule panel = mapped(base, lo, hi);
    for (std::size_t g = 0; g < panel.nodes.size(); ++g) {
      const double th = panel.nodes[g];
      const double m = wright_m(alpha, th, policy);
      rule.theta.push_back(th);
      rule.weight_s.push_back(panel.weights[g] * m);
      rule.weight_t.push_back(panel.weights[g] * alpha * th * m);
    }
  }
  return rule;
}

double SubordinationRule::s_multiplier(double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sum += weight_s[i] * std::exp(-x * theta[i]);
  }
  return sum;
}

double SubordinationRule::t_multiplier(double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sum += weight_t[i] * std::exp(-x * theta[i]);
  }
  return sum;
}

struct FamilyEvaluator::Impl {
  Family family;
  Path path;
  double alpha;
  double gamma_type;
  // t^{prefactor_exponent} multiplies the Mittag-Leffler value.
  double prefactor_exponent = 0.0;
  std::unique_ptr<MittagLeffler> ml;
  std::unique_ptr<SubordinationRule> rule;
};

FamilyEvaluator::FamilyEvaluator(const FracParams& params, Family family,
                                 Path path, const EvalPolicy& policy)
    : impl_(std::make_unique<Impl>()) {
  const double alpha = params.alpha;
  const double gamma_type = params.gamma_type;
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("FamilyEvaluator: alpha must lie in (0, 1]");
  }
  if (!(gamma_type >= 0.0) || !(gamma_type <= 1.0)) {
    throw std::invalid_argument("FamilyEvaluator: gamma_type must lie in [0, 1]");
  }
  impl_->family = family;
  impl_->path = path;
  impl_->alpha = alpha;
  impl_->gamma_type = gamma_type;

  if (family == Family::resolvent) {
    throw std::invalid_argument("FamilyEvaluator: resolvent has no time multiplier");
  }
  if (path == Path::subordination) {
    if (family == Family::semigroup || family == Family::s_alpha_gamma) {
      throw std::invalid_argument(
          "FamilyEvaluator: subordination path supports s_alpha, t_alpha, r_alpha");
    }
    impl_->rule = std::make_unique<SubordinationRule>(
        SubordinationRule::build(alpha, policy));
    if (family == Family::r_alpha) impl_->prefactor_exponent = alpha - 1.0;
    return;
  }
  switch (family) {
    case Family::semigroup:
      break;
    case Family::s_alpha:
      impl_->ml = std::make_unique<MittagLeffler>(MLParams{alpha, 1.0}, policy);
      break;
    case Family::t_alpha:
      impl_->ml = std::make_unique<MittagLeffler>(MLParams{alpha, alpha}, policy);
      break;
    case Family::r_alpha:
      impl_->ml = std::make_unique<MittagLeffler>(MLParams{alpha, alpha}, policy);
      impl_->prefactor_exponent = alpha - 1.0;
      break;
    case Family::s_alpha_gamma:
      impl_->ml = std::make_unique<MittagLeffler>(
          MLParams{alpha, alpha + gamma_type * (1.0 - alpha)}, policy);
      impl_->prefactor_exponent = (alpha - 1.0) * (1.0 - gamma_type);
      break;
    case Family::resolvent:
      break;
  }
}

FamilyEvaluator::FamilyEvaluator(FamilyEvaluator&&) noexcept = default;
FamilyEvaluator& FamilyEvaluator::operator=(FamilyEvaluator&&) noexcept = default;
FamilyEvaluator::~FamilyEvaluator() = default;

double FamilyEvaluator::operator()(double lambda, double t) const {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("FamilyEvaluator: lambda must be >= 0");
  }
  if (!(t >= 0.0)) {
    throw std::domain_error("FamilyEvaluator: t must be >= 0");
  }
  const Impl& im = *impl_;
  if (im.family == Family::semigroup) return std::exp(-lambda * t);
  if (t == 0.0) {
    if (im.family == Family::r_alpha && im.alpha < 1.0) {
      throw std::domain_error("FamilyEvaluator: r_alpha is singular at t = 0");
    }
    if (im.family == Family::s_alpha_gamma && im.gamma_type < 1.0) {
      throw std::domain_error(
          "FamilyEvaluator: s_alpha_gamma is singular at t = 0 for gamma < 1");
    }
  }
  const double x = lambda * std::pow(t, im.alpha);
  double value;
  if (im.path == Path::subordination) {
    value = im.family == Family::s_alpha ? im.rule->s_multiplier(x)
                                         : im.rule->t_multiplier(x);
  } else {
    value = (*im.ml)(-x);
  }
  if (im.prefactor_exponent != 0.0) {
    value *= std::pow(t, im.prefactor_exponent);
  }
  return value;
}

double family_multiplier(const FracParams& params, Family family,
                         double lambda, double t, Path path,
                         const EvalPolicy& policy) {
  return FamilyEvaluator(params, family, path, policy)(lambda, t);
}

namespace {

SpectralField apply_family(const FracParams& params,
                           const DiagonalSectorialOperator& op, Family family,
                           double t, const SpectralField& x, Path path) {
  op.validate();
  check_mode_compat(op, x);
  const FamilyEvaluator eval(params, family, path);
  SpectralField out = x;
  for (int n = 0; n < op.mode_count; ++n) {
    out.coefficients[n] = eval(op.eigenvalues[n], t) * x.coefficients[n];
  }
  return out;
}

}  // namespace

SpectralField semigroup_apply(const DiagonalSectorialOperator& op, double t,
                              const SpectralField& x) {
  op.validate();
  check_mode_compat(op, x);
  if (!(t >= 0.0)) throw std::domain_error("semigroup_apply: t must be >= 0");
  SpectralField out = x;
  for (int n = 0; n < op.mode_count; ++n) {
    out.coefficients[n] = std::exp(-op.eigenvalues[n] * t) * x.coefficients[n];
  }
  return out;
}

SpectralField t_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path) {
  return apply_family(params, op, Family::t_alpha, t, x, path);
}

SpectralField s_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path) {
  return apply_family(params, op, Family::s_alpha, t, x, path);
}

SpectralField r_alpha_apply(const FracParams& params,
                            const DiagonalSectorialOperator& op, double t,
                            const SpectralField& x, Path path) {
  return apply_family(params, op, Family::r_alpha, t, x, path);
}

SpectralField s_alpha_gamma_apply(const FracParams& params,
                                  const DiagonalSectorialOperator& op,
                                  double t, const SpectralField& x) {
  if (t == 0.0 && params.gamma_type == 1.0) return x;
  return apply_family(params, op, Family::s_alpha_gamma, t, x, Path::direct);
}

SampledFn s_alpha_gamma_multiplier_quadrature(const FracParams& params,
                                              double lambda,
                                              const TimeGrid& grid,
                                              const EvalPolicy& policy) {
  const double alpha = params.alpha;
  const MittagLeffler ml(MLParams{alpha, alpha}, policy);
  const SampledFn r_samples = sample(
      grid,
      [&](double t) {
        return std::pow(t, alpha - 1.0) * ml(-lambda * std::pow(t, alpha));
      },
      true, alpha - 1.0);
  const double order = params.gamma_type * (1.0 - alpha);
  return order > 0.0 ? rl_integral(order, r_samples) : r_samples;
}

BoundProbeReport resolvent_probe(const DiagonalSectorialOperator& op,
                                 const std::vector<std::complex<double>>& z_samples,
                                 double beta_sect) {
  op.validate();
  if (z_samples.empty()) {
    throw std::invalid_argument("resolvent_probe: empty sample");
  }
  std::vector<double> measured(z_samples.size());
  std::vector<double> scale(z_samples.size());
  for (std::size_t i = 0; i < z_samples.size(); ++i) {
    const std::complex<double> z = z_samples[i];
    const double abs_z = std::abs(z);
    if (!(abs_z > 0.0)) {
      throw std::domain_error("resolvent_probe: sample at the origin");
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (double lambda : op.eigenvalues) {
      min_dist = std::min(min_dist, std::abs(z + lambda));
    }
    if (!(min_dist > 1e-12 * (1.0 + abs_z))) {
      throw std::domain_error("resolvent_probe: sample on the spectrum");
    }
    measured[i] = 1.0 / min_dist;
    scale[i] = std::pow(abs_z, beta_sect);
  }
  BoundProbeReport report;
  report.family = Family::resolvent;
  report.exponent_expected = beta_sect;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    report.constant_fitted = std::max(report.constant_fitted, measured[i] / scale[i]);
  }
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < measured.size(); ++i) {
    report.max_violation = std::max(
        report.max_violation, measured[i] - report.constant_fitted * scale[i]);
  }
  return report;
}

BoundProbeReport norm_bound_probe(const FracParams& params,
                                  const DiagonalSectorialOperator& op,
                                  Family family,
                                  const std::vector<double>& t_samples) {
  op.validate();
  if (family != Family::t_alpha && family != Family::s_alpha_gamma) {
    throw std::invalid_argument(
        "norm_bound_probe: family must be t_alpha or s_alpha_gamma");
  }
  if (t_samples.empty()) {
    throw std::invalid_argument("norm_bound_probe: empty sample");
  }
  const double alpha = params.alpha;
  const double beta = params.beta_sect;
  const double gamma_type = params.gamma_type;
  BoundProbeReport report;
  report.family = family;
  report.exponent_expected =
      family == Family::t_alpha
          ? -alpha * (1.0 + beta)
          : gamma_type * (1.0 - alpha) - alpha * beta - 1.0;

  const FamilyEvaluator eval(params, family, Path::direct);
  std::vector<double> measured(t_samples.size());
  std::vector<double> scale(t_samples.size());
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double t = t_samples[i];
    if (!(t > 0.0)) {
      throw std::domain_error("norm_bound_probe: t samples must be positive");
    }
    double norm = 0.0;
    for (double lambda : op.eigenvalues) {
      norm = std::max(norm, std::abs(eval(lambda, t)));
    }
    measured[i] = norm;
    scale[i] = std::pow(t, report.exponent_expected);
  }
  for (std::size_t i = 0; i < measured.size(); ++i) {
    report.constant_fitted = std::max(report.constant_fitted, measured[i] / scale[i]);
  }
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < measured.size(); ++i) {
    report.max_violation = std::max(
        report.max_violation, measured[i] - report.constant_fitted * scale[i]);
  }
  return report;
}

ContinuityReport strong_continuity_probe(
    const FracParams& params, const DiagonalSectorialOperator& op,
    Family family, const SpectralField& x,
    const std::vector<std::pair<double, double>>& t_pairs) {
  op.validate();
  check_mode_compat(op, x);
  const FamilyEvaluator eval(params, family, Path::direct);
  ContinuityReport report;
  report.pair_defects.reserve(t_pairs.size());
  for (const auto& [t1, t2] : t_pairs) {
    double sum = 0.0;
    for (int n = 0; n < op.mode_count; ++n) {
      const double d =
          (eval(op.eigenvalues[n], t2) - eval(op.eigenvalues[n], t1)) *
          x.coefficients[n];
      sum += d * d;
    }
    const double defect = std::sqrt(0.5 * kPi * sum);
    report.pair_defects.push_back(defect);
    report.max_defect = std::max(report.max_defect, defect);
  }
  return report;
}

}  // namespace hilfer
