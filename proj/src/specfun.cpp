#include "hilfer/specfun.hpp"

#include <cmath>
#include <limits>

#include "hilfer/quadrature.hpp"

namespace hilfer {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kSqrtTwoPi = 2.50662827463100050242;

double sinpi(double x) {
  const double n = std::nearbyint(x);
  const double s = std::sin(kPi * (x - n));
  return static_cast<long long>(n) % 2 == 0 ? s : -s;
}

long double sinpi_l(long double x) {
  const long double n = nearbyintl(x);
  const long double s = sinl(kPiL * (x - n));
  return static_cast<long long>(n) % 2 == 0 ? s : -s;
}

long double cospi_l(long double x) {
  const long double n = nearbyintl(x);
  const long double c = cosl(kPiL * (x - n));
  return static_cast<long long>(n) % 2 == 0 ? c : -c;
}

// Signed logarithm of 1/Gamma(y); sign = 0 marks a pole of Gamma (value 0).
struct SignedLog {
  long double log_abs;
  int sign;
};

SignedLog rgamma_log(long double y) {
  if (y > 0.5L) return {-lgammal(y), +1};
  const long double s = sinpi_l(y);
  if (s == 0.0L) return {0.0L, 0};
  return {logl(fabsl(s) / kPiL) + lgammal(1.0L - y), s > 0 ? +1 : -1};
}

struct KahanSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double t) {
    const long double y = t - comp;
    const long double u = sum + y;
    comp = (u - sum) - y;
    sum = u;
  }
};

const double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_positive(double x) {
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return kSqrtTwoPi * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("gamma: non-finite argument");
  }
  if (x < 0.5) {
    if (x == std::floor(x)) {
      throw std::domain_error("gamma: pole at x = " + std::to_string(x));
    }
    return kPi / (sinpi(x) * gamma_positive(1.0 - x));
  }
  return gamma_positive(x);
}

// ---------------------------------------------------------------------------
// Mittag-Leffler
// ---------------------------------------------------------------------------

namespace {

// Zone boundaries in the conditioning parameter m = |z|^(1/alpha), which is
// approximately the natural log of the largest power-series term on the
// negative axis. Long-double accumulation keeps the series sound through
// m <= kSeriesCondMax; the integral representation covers the middle; the
// asymptotic expansion's optimal-truncation error ~ e^{-m} takes over after
// kAsymCondMin.
constexpr double kSeriesCondMax = 16.0;
constexpr double kAsymCondMin = 30.0;
constexpr double kIntegralAlphaMax = 0.95;
constexpr int kAsymTermsMax = 100;
constexpr double kIntegralCutoff = 70.0;
constexpr int kIntegralPanels = 12;

}  // namespace

struct MittagLeffler::Impl {
  bool exp_form = false;
  bool expm1_form = false;

  std::vector<long double> rg;  // 1/Gamma(alpha k + beta)
  double table_zmax = 0.0;

  bool integral_ok = false;
  std::unique_ptr<MittagLeffler> reduced;
  double recip_gamma_reduced = 0.0;
  std::vector<long double> sp_weff, sp_ra, sp_r2a;
  long double sp_s1 = 0.0L, sp_s2 = 0.0L, sp_c = 0.0L;

  std::vector<SignedLog> rga;

  long double rg_at(double alpha, double beta, std::size_t k) const {
    if (k < rg.size()) return rg[k];
    return expl(-lgammal(static_cast<long double>(alpha) * k + beta));
  }
};

MittagLeffler::MittagLeffler(MLParams params, EvalPolicy policy)
    : params_(params), policy_(policy), impl_(new Impl) {
  const double a = params_.alpha;
  const double b = params_.beta_ml;
  if (!(a > 0.0) || !(a <= 2.0) || !std::isfinite(a)) {
    throw std::domain_error("mittag_leffler: alpha must lie in (0, 2]");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::domain_error("mittag_leffler: beta must be positive");
  }
  if (a == 1.0 && b == 1.0) {
    impl_->exp_form = true;
    return;
  }
  if (a == 1.0 && b == 2.0) {
    impl_->expm1_form = true;
    return;
  }

  const double zmax = std::pow(kSeriesCondMax, a);
  impl_->table_zmax = zmax;
  const double lz = std::log(std::max(zmax, 1e-30));
  double peak = -std::numeric_limits<double>::infinity();
  int k_end = 1;
  for (int k = 0; k < policy_.series_terms_max; ++k) {
    const double lt = k * lz - std::lgamma(a * k + b);
    if (lt > peak) peak = lt;
    k_end = k + 1;
    if (lt < peak - 90.0 && k > 4) break;
  }
  impl_->rg.resize(k_end);
  for (int k = 0; k < k_end; ++k) {
    impl_->rg[k] =
        expl(-lgammal(static_cast<long double>(a) * k + static_cast<long double>(b)));
  }

  if (a <= kIntegralAlphaMax) {
    if (b > 1.0 + a - 0.25) {
      impl_->reduced.reset(new MittagLeffler({a, b - a}, policy_));
      impl_->recip_gamma_reduced = 1.0 / hilfer::gamma(b - a);
    } else {
      impl_->integral_ok = true;
      const long double al = a;
      const long double bl = b;
      const double p = 3.0 / (1.0 + a - b);
      const double upper = std::pow(kIntegralCutoff, 1.0 / p);
      const QuadRule base = gauss_legendre(16);
      const int n = kIntegralPanels * 16;
      impl_->sp_weff.reserve(n);
      impl_->sp_ra.reserve(n);
      impl_->sp_r2a.reserve(n);
      const double h = upper / kIntegralPanels;
      for (int panel = 0; panel < kIntegralPanels; ++panel) {
        const double mid = (panel + 0.5) * h;
        for (int i = 0; i < 16; ++i) {
          const long double u = mid + 0.5 * h * base.nodes[i];
          const long double w = 0.5 * h * base.weights[i];
          const long double r = powl(u, static_cast<long double>(p));
          const long double jac =
              static_cast<long double>(p) * powl(u, static_cast<long double>(p) - 1.0L);
          impl_->sp_weff.push_back(w * jac * expl(-r) * powl(r, al - bl) / kPiL);
          impl_->sp_ra.push_back(powl(r, al));
          impl_->sp_r2a.push_back(powl(r, 2.0L * al));
        }
      }
      impl_->sp_s1 = sinpi_l(bl - al);
      impl_->sp_s2 = sinpi_l(bl);
      impl_->sp_c = cospi_l(al);
    }
  }

  impl_->rga.resize(kAsymTermsMax + 1);
  for (int k = 1; k <= kAsymTermsMax; ++k) {
    impl_->rga[k] = rgamma_log(static_cast<long double>(b) -
                               static_cast<long double>(a) * k);
  }
}

MittagLeffler::~MittagLeffler() = default;
MittagLeffler::MittagLeffler(MittagLeffler&&) noexcept = default;
MittagLeffler& MittagLeffler::operator=(MittagLeffler&&) noexcept = default;

double MittagLeffler::eval_series(double z) const {
  const double a = params_.alpha;
  const double b = params_.beta_ml;
  const long double zl = z;
  KahanSum acc;
  long double zk = 1.0L;
  long double max_term = 0.0L;
  int small_run = 0;
  int zero_run = 0;
  for (int k = 0; k < policy_.series_terms_max; ++k) {
    const long double t = zk * impl_->rg_at(a, b, static_cast<std::size_t>(k));
    acc.add(t);
    const long double mag = fabsl(t);
    if (mag > max_term) max_term = mag;
    if (t == 0.0L && k > 0) {
      if (++zero_run >= 3) return static_cast<double>(acc.sum);
    } else {
      zero_run = 0;
      if (k > 0 && mag <= 1.1e-19L * max_term) {
        if (++small_run >= 2) return static_cast<double>(acc.sum);
      } else {
        small_run = 0;
      }
    }
    zk *= zl;
  }
  const double bound =
      acc.sum != 0.0L ? static_cast<double>(fabsl(max_term) * 1e-18L / fabsl(acc.sum))
                      : 1.0;
  throw accuracy_error("mittag_leffler: series terms exhausted before convergence",
                       bound);
}

double MittagLeffler::eval_integral(double z) const {
  if (!(z < 0.0)) {
    throw std::domain_error("mittag_leffler: integral branch requires z < 0");
  }
  if (impl_->reduced) {
    return (impl_->reduced->eval_integral(z) - impl_->recip_gamma_reduced) / z;
  }
  if (!impl_->integral_ok) {
    throw std::domain_error(
        "mittag_leffler: integral branch unavailable for alpha > 0.95");
  }
  const long double x = -static_cast<long double>(z);
  const long double num_const = x * impl_->sp_s1;
  const long double cx2 = 2.0L * x * impl_->sp_c;
  const long double x2 = x * x;
  KahanSum acc;
  for (std::size_t i = 0; i < impl_->sp_weff.size(); ++i) {
    const long double ra = impl_->sp_ra[i];
    const long double den = impl_->sp_r2a[i] + ra * cx2 + x2;
    acc.add(impl_->sp_weff[i] * (num_const + ra * impl_->sp_s2) / den);
  }
  return static_cast<double>(acc.sum);
}

double MittagLeffler::eval_asymptotic(double z) const {
  if (!(z < 0.0)) {
    throw std::domain_error("mittag_leffler: asymptotic branch requires z < 0");
  }
  const long double x = -static_cast<long double>(z);
  const long double lx = logl(x);
  KahanSum acc;
  long double prev_mag = std::numeric_limits<long double>::max();
  long double omitted = 0.0L;
  bool truncated = false;
  for (int k = 1; k <= kAsymTermsMax; ++k) {
    const SignedLog& rg = impl_->rga[k];
    if (rg.sign == 0) continue;
    const long double mag = expl(rg.log_abs - k * lx);
    if (k > 1 && mag >= prev_mag) {
      omitted = mag;
      truncated = true;
      break;
    }
    const int sign = ((k - 1) % 2 == 0 ? 1 : -1) * rg.sign;
    acc.add(sign * mag);
    prev_mag = mag;
    if (mag <= 1e-3L * policy_.tail_tolerance * fabsl(acc.sum)) {
      omitted = mag;
      truncated = true;
      break;
    }
  }
  if (!truncated) omitted = prev_mag;
  const double rel_bound =
      acc.sum != 0.0L ? static_cast<double>(omitted / fabsl(acc.sum)) : 1.0;
  if (rel_bound > 1e-6) {
    throw accuracy_error("mittag_leffler: asymptotic expansion not accurate here",
                         rel_bound);
  }
  return static_cast<double>(acc.sum);
}

double MittagLeffler::operator()(double z) const {
  if (!std::isfinite(z)) {
    throw std::domain_error("mittag_leffler: non-finite argument");
  }
  if (impl_->exp_form) return std::exp(z);
  if (impl_->expm1_form) return z == 0.0 ? 1.0 : std::expm1(z) / z;
  if (z >= 0.0) return eval_series(z);
  const double x = -z;
  const double m = std::pow(x, 1.0 / params_.alpha);
  if (m <= kSeriesCondMax) return eval_series(z);
  if (m < kAsymCondMin) {
    if (impl_->reduced) {
      return ((*impl_->reduced)(z) - impl_->recip_gamma_reduced) / z;
    }
    if (impl_->integral_ok) return eval_integral(z);
    throw accuracy_error(
        "mittag_leffler: argument falls in the unsupported middle zone for "
        "alpha > 0.95",
        1e-7);
  }
  return eval_asymptotic(z);
}

double mittag_leffler(MLParams params, double z, const EvalPolicy& policy) {
  return MittagLeffler(params, policy)(z);
}

// ---------------------------------------------------------------------------
// Wright function M_alpha
// ---------------------------------------------------------------------------

namespace {

constexpr double kWrightSeriesCondMax = 12.0;
constexpr int kWrightSeriesCap = 600;
constexpr double kWrightIntegralExponentCap = 60.0;

void wright_validate(double alpha, double theta) {
  if (!(alpha > 0.0) || !(alpha < 1.0) || !std::isfinite(alpha)) {
    throw std::domain_error("wright_m: alpha must lie in (0, 1)");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::domain_error("wright_m: theta must be finite and nonnegative");
  }
}

double wright_series(double alpha, double theta, const EvalPolicy& policy) {
  const long double al = alpha;
  const long double lt_base = logl(static_cast<long double>(theta));
  KahanSum acc;
  long double max_term = 0.0L;
  int small_run = 0;
  const int cap = std::min(policy.series_terms_max, kWrightSeriesCap);
  for (int n = 1; n <= cap; ++n) {
    const SignedLog rg = rgamma_log(1.0L - al * n);
    if (rg.sign == 0) continue;
    const long double mag =
        expl((n - 1) * lt_base - lgammal(static_cast<long double>(n)) + rg.log_abs);
    const int sign = ((n - 1) % 2 == 0 ? 1 : -1) * rg.sign;
    acc.add(sign * mag);
    if (mag > max_term) max_term = mag;
    if (n > 1 && mag <= 1.1e-19L * max_term) {
      if (++small_run >= 3) return static_cast<double>(acc.sum);
    } else {
      small_run = 0;
    }
  }
  const double bound =
      acc.sum != 0.0L ? static_cast<double>(max_term * 1e-18L / fabsl(acc.sum)) : 1.0;
  throw accuracy_error("wright_m: series terms exhausted before convergence", bound);
}

// Positive single-integral representation
//   M_a(theta) = theta^{a/(1-a)} / (pi (1-a)) *
//                integral_0^pi A(phi) exp(-theta^{1/(1-a)} A(phi)) dphi,
// A(phi) = [sin(a phi)/sin(phi)]^{a/(1-a)} * sin((1-a) phi)/sin(phi),
// with A increasing from A(0) = (1-a) a^{a/(1-a)}. The integrand is positive,
// so the evaluation has no cancellation; assembled in log space so the far
// tail underflows to 0 gracefully.
double wright_integral(double alpha, double theta) {
  const long double al = alpha;
  const long double ratio = al / (1.0L - al);
  const long double b = (1.0L - al) * powl(al, ratio);
  const long double c = powl(static_cast<long double>(theta), 1.0L / (1.0L - al));

  const auto big_a = [&](long double phi) -> long double {
    if (phi <= 0.0L) return b;
    const long double sp = sinl(phi);
    return powl(sinl(al * phi) / sp, ratio) * sinl((1.0L - al) * phi) / sp;
  };

  long double lo = 0.0L;
  long double hi = kPiL - 1e-12L;
  for (int it = 0; it < 100; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (c * (big_a(mid) - b) < kWrightIntegralExponentCap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const long double phi_hi = hi;

  static const QuadRule base = gauss_legendre(16);
  const int segments = 10;
  KahanSum acc;
  long double left = 0.0L;
  for (int s = 0; s < segments; ++s) {
    const long double right =
        s + 1 == segments ? phi_hi : phi_hi / powl(2.0L, segments - 1 - s);
    const long double mid = 0.5L * (left + right);
    const long double half = 0.5L * (right - left);
    for (int i = 0; i < 16; ++i) {
      const long double phi = mid + half * base.nodes[i];
      const long double a_val = big_a(phi);
      acc.add(half * base.weights[i] * a_val * expl(-c * (a_val - b)));
    }
    left = right;
  }
  if (!(acc.sum > 0.0L)) return 0.0;
  const long double log_m = ratio * logl(static_cast<long double>(theta)) -
                            logl(kPiL * (1.0L - al)) - c * b + logl(acc.sum);
  return static_cast<double>(expl(log_m));
}

}  // namespace

double wright_m(double alpha, double theta, const EvalPolicy& policy) {
  wright_validate(alpha, theta);
  if (theta == 0.0) return 1.0 / gamma(1.0 - alpha);
  const double ratio = alpha / (1.0 - alpha);
  const double b = (1.0 - alpha) * std::pow(alpha, ratio);
  const double x = b * std::pow(theta, 1.0 / (1.0 - alpha));
  if (x <= kWrightSeriesCondMax) return wright_series(alpha, theta, policy);
  return wright_integral(alpha, theta);
}

double wright_m_moment(double alpha, double sigma, const EvalPolicy& policy) {
  wright_validate(alpha, 0.0);
  if (!(sigma > -0.5) || !std::isfinite(sigma)) {
    throw std::domain_error("wright_m_moment: sigma must exceed -0.5");
  }
  const double ratio = alpha / (1.0 - alpha);
  const double b = (1.0 - alpha) * std::pow(alpha, ratio);
  const double theta_max = std::pow(kWrightIntegralExponentCap / b, 1.0 - alpha);
  const double v_max = std::sqrt(theta_max);
  static const QuadRule base = gauss_legendre(16);
  const auto integrand = [&](double v) {
    return 2.0 * std::pow(v, 2.0 * sigma + 1.0) * wright_m(alpha, v * v, policy);
  };
  const double coarse = panel_integrate(integrand, 0.0, v_max, 24, base);
  const double fine = panel_integrate(integrand, 0.0, v_max, 48, base);
  const double disagreement = std::fabs(fine - coarse);
  if (disagreement > 1e-9 * std::max(1.0, std::fabs(fine))) {
    throw accuracy_error("wright_m_moment: quadrature not converged", disagreement);
  }
  return fine;
}

double wright_laplace_check(double alpha, double r, const EvalPolicy& policy) {
  wright_validate(alpha, 0.0);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("wright_laplace_check: r must be positive");
  }
  const double ratio = alpha / (1.0 - alpha);
  const double b = (1.0 - alpha) * std::pow(alpha, ratio);
  const double u_max = std::pow(kWrightIntegralExponentCap / b, 1.0 - alpha);
  static const QuadRule base = gauss_legendre(16);

  // After u = theta^{-alpha} the integral is I = int_0^inf M_a(u)
  // exp(-r u^{-1/alpha}) du. The u <= 1 part is evaluated back in the
  // s = u^{-1/alpha} variable where the exponential factor is exp(-r s); the
  // u >= 1 part directly.
  const auto part_near_zero = [&](int panels) {
    const double s_hi = 1.0 + 80.0 / r;
    return panel_integrate(
        [&](double s) {
          return wright_m(alpha, std::pow(s, -alpha), policy) * std::exp(-r * s) *
                 alpha * std::pow(s, -alpha - 1.0);
        },
        1.0, s_hi, panels, base);
  };
  const auto part_bulk = [&](int panels) {
    return panel_integrate(
        [&](double u) {
          return wright_m(alpha, u, policy) *
                 std::exp(-r * std::pow(u, -1.0 / alpha));
        },
        1.0, u_max, panels, base);
  };
  const double coarse = part_near_zero(40) + part_bulk(64);
  const double fine = part_near_zero(80) + part_bulk(128);
  if (std::fabs(fine - coarse) > 1e-10 * std::max(1.0, std::fabs(fine))) {
    throw accuracy_error("wright_laplace_check: quadrature not converged",
                         std::fabs(fine - coarse));
  }
  return std::fabs(fine - std::exp(-std::pow(r, alpha)));
}

}  // namespace hilfer
