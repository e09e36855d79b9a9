#include "hilfer/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "hilfer/quadrature.hpp"
#include "hilfer/specfun.hpp"

namespace hilfer {
namespace {

constexpr double kPi = 3.14159265358979323846;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HILFER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Fixed contiguous chunking so the work partition (and therefore every
// floating-point reduction order) is independent of the thread count.
template <typename Fn>
void parallel_for(int count, int threads, const Fn& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int chunk = (count + threads - 1) / threads;
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) {
    const int lo = k * chunk;
    const int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &err_mutex, &err] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// Sine synthesis/analysis between N modes and P = 2N equispaced interior
// points y_p = p pi/(P+1); the discrete orthogonality makes the round trip
// exact for band-limited fields.
struct SineTransform {
  int n_modes;
  int n_points;
  std::vector<double> points;
  std::vector<double> table;  // [mode * n_points + p]

  explicit SineTransform(int n) : n_modes(n), n_points(2 * n) {
    points.resize(n_points);
    table.resize(static_cast<std::size_t>(n_modes) * n_points);
    const double step = kPi / (n_points + 1);
    for (int p = 0; p < n_points; ++p) points[p] = (p + 1) * step;
    for (int m = 0; m < n_modes; ++m) {
      for (int p = 0; p < n_points; ++p) {
        table[static_cast<std::size_t>(m) * n_points + p] =
            std::sin((m + 1.0) * points[p]);
      }
    }
  }

  void synth(const std::vector<double>& coeffs, std::vector<double>& phys) const {
    phys.assign(n_points, 0.0);
    for (int m = 0; m < n_modes; ++m) {
      const double c = coeffs[m];
      if (c == 0.0) continue;
      const double* row = table.data() + static_cast<std::size_t>(m) * n_points;
      for (int p = 0; p < n_points; ++p) phys[p] += c * row[p];
    }
  }

  void analyze(const std::vector<double>& phys, std::vector<double>& coeffs) const {
    coeffs.assign(n_modes, 0.0);
    const double factor = 2.0 / (n_points + 1);
    for (int m = 0; m < n_modes; ++m) {
      const double* row = table.data() + static_cast<std::size_t>(m) * n_points;
      double sum = 0.0;
      for (int p = 0; p < n_points; ++p) sum += phys[p] * row[p];
      coeffs[m] = factor * sum;
    }
  }
};

double field_l2(const std::vector<double>& coeffs) {
  double sum = 0.0;
  for (double c : coeffs) sum += c * c;
  return std::sqrt(0.5 * kPi * sum);
}

[[noreturn]] void throw_nonfinite(const char* what, double t, double y) {
  std::ostringstream msg;
  msg << "solver: non-finite " << what << " value at t=" << t << ", y=" << y;
  throw std::runtime_error(msg.str());
}

// Physical-space evaluation of f along the trajectory; index 0 is left empty
// when the origin state is a weighted limit (gamma < 1).
std::vector<std::vector<double>> sample_inner_f(const ProblemSpec& spec,
                                                const SineTransform& st,
                                                const Trajectory& u,
                                                int threads) {
  const int m = u.grid.intervals;
  const bool origin_real = spec.params.gamma_type == 1.0;
  std::vector<std::vector<double>> f_phys(m + 1);
  const int j_lo = origin_real ? 0 : 1;
  parallel_for(m + 1 - j_lo, threads, [&](int idx) {
    const int j = j_lo + idx;
    const double t = u.grid.nodes[j];
    std::vector<double> phys;
    st.synth(u.states[j].coefficients, phys);
    std::vector<double> values(st.n_points);
    for (int p = 0; p < st.n_points; ++p) {
      values[p] = spec.f(t, st.points[p], phys[p]);
      if (!std::isfinite(values[p])) throw_nonfinite("f", t, st.points[p]);
    }
    f_phys[j] = std::move(values);
  });
  return f_phys;
}

// Graded-mesh trapezoid for B u(t_j) = int_0^{t_j} k(t_j, s) f(s, u(s)) ds.
// With a weighted-limit origin the first panel uses its right endpoint only.
std::vector<double> b_phys_at(const ProblemSpec& spec, const SineTransform& st,
                              const std::vector<std::vector<double>>& f_phys,
                              const TimeGrid& grid, int j) {
  std::vector<double> acc(st.n_points, 0.0);
  if (j == 0) return acc;
  const double tj = grid.nodes[j];
  const bool origin_real = spec.params.gamma_type == 1.0;
  {
    const double h0 = grid.nodes[1] - grid.nodes[0];
    const double k1 = spec.kernel_k(tj, grid.nodes[1]);
    if (origin_real) {
      const double k0 = spec.kernel_k(tj, grid.nodes[0]);
      for (int p = 0; p < st.n_points; ++p) {
        acc[p] += 0.5 * h0 * (k0 * f_phys[0][p] + k1 * f_phys[1][p]);
      }
    } else {
      for (int p = 0; p < st.n_points; ++p) acc[p] += h0 * k1 * f_phys[1][p];
    }
  }
  for (int i = 1; i < j; ++i) {
    const double hi = grid.nodes[i + 1] - grid.nodes[i];
    const double ka = spec.kernel_k(tj, grid.nodes[i]);
    const double kb = spec.kernel_k(tj, grid.nodes[i + 1]);
    for (int p = 0; p < st.n_points; ++p) {
      acc[p] += 0.5 * hi * (ka * f_phys[i][p] + kb * f_phys[i + 1][p]);
    }
  }
  return acc;
}

struct ForcingResult {
  // Modal coefficients of g(t_j, u, Bu) per node; index 0 is zero when the
  // origin holds a weighted limit, and consumers substitute node 1 there.
  std::vector<std::vector<double>> g_modal;
  std::vector<double> g_norms;
  bool all_zero = true;
};

ForcingResult compute_forcing(const ProblemSpec& spec, const SineTransform& st,
                              const Trajectory& u, int threads) {
  const int m = u.grid.intervals;
  ForcingResult out;
  out.g_modal.assign(m + 1, std::vector<double>(st.n_modes, 0.0));
  out.g_norms.assign(m + 1, 0.0);
  if (!spec.g) return out;

  const bool origin_real = spec.params.gamma_type == 1.0;
  const bool has_memory = static_cast<bool>(spec.f) && static_cast<bool>(spec.kernel_k);
  std::vector<std::vector<double>> f_phys;
  if (has_memory) f_phys = sample_inner_f(spec, st, u, threads);

  const int j_lo = origin_real ? 0 : 1;
  std::vector<char> nonzero(m + 1, 0);
  parallel_for(m + 1 - j_lo, threads, [&](int idx) {
    const int j = j_lo + idx;
    const double t = u.grid.nodes[j];
    std::vector<double> phys;
    st.synth(u.states[j].coefficients, phys);
    std::vector<double> b_phys =
        has_memory ? b_phys_at(spec, st, f_phys, u.grid, j)
                   : std::vector<double>(st.n_points, 0.0);
    std::vector<double> g_phys(st.n_points);
    bool any = false;
    for (int p = 0; p < st.n_points; ++p) {
      g_phys[p] = spec.g(t, st.points[p], phys[p], b_phys[p]);
      if (!std::isfinite(g_phys[p])) throw_nonfinite("g", t, st.points[p]);
      any = any || g_phys[p] != 0.0;
    }
    st.analyze(g_phys, out.g_modal[j]);
    out.g_norms[j] = field_l2(out.g_modal[j]);
    nonzero[j] = any ? 1 : 0;
  });
  for (int j = 0; j <= m; ++j) {
    if (nonzero[j]) out.all_zero = false;
  }
  return out;
}

// Product-integration weights for int_{t_i}^{t_{i+1}} K(t_j - r) phi(r) dr
// with K(v) = v^{a-1} E_{a,a}(-lambda v^a) and phi piecewise linear:
// contribution = w0 * phi_i + w1 * (phi_{i+1} - phi_i). Triangular layout,
// row j >= 1 at offset j(j-1)/2.
//
// Moments come from the exact antiderivatives
//   F1(z) = z^a     E_{a,a+1}(-lambda z^a)   (F1' = K)
//   F2(z) = z^{a+1} E_{a,a+2}(-lambda z^a)   (F2' = F1)
// so the kernel's boundary layer is integrated exactly at any lambda.
// Panels much narrower than their distance to t_j would lose the moments
// to cancellation in the endpoint differences; the kernel is smooth across
// such panels, so Gauss quadrature takes over there.
constexpr double kNarrowPanelRatio = 1e-3;

void build_conv_weights(const TimeGrid& grid, double alpha, double lambda,
                        const QuadRule& gl, const MittagLeffler& ml_k,
                        const MittagLeffler& ml_f1, const MittagLeffler& ml_f2,
                        std::vector<double>& w0, std::vector<double>& w1) {
  const int m = grid.intervals;
  const std::size_t total = static_cast<std::size_t>(m) * (m + 1) / 2;
  w0.assign(total, 0.0);
  w1.assign(total, 0.0);
  std::vector<double> f1(m + 1), f2(m + 1);
  for (int j = 1; j <= m; ++j) {
    const double tj = grid.nodes[j];
    const std::size_t off = static_cast<std::size_t>(j) * (j - 1) / 2;
    for (int i = 0; i <= j; ++i) {
      const double z = tj - grid.nodes[i];
      if (z == 0.0) {
        f1[i] = 0.0;
        f2[i] = 0.0;
        continue;
      }
      const double za = std::pow(z, alpha);
      const double arg = -lambda * za;
      f1[i] = za * ml_f1(arg);
      f2[i] = za * z * ml_f2(arg);
    }
    for (int i = 0; i < j; ++i) {
      const double lo = grid.nodes[i];
      const double h = grid.nodes[i + 1] - lo;
      const double dist = tj - grid.nodes[i + 1];
      if (h < kNarrowPanelRatio * dist) {
        double a0 = 0.0;
        double a1 = 0.0;
        for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
          const double frac = 0.5 * (gl.nodes[g] + 1.0);
          const double v = tj - (lo + frac * h);
          const double base = 0.5 * h * gl.weights[g] *
                              std::pow(v, alpha - 1.0) *
                              ml_k(-lambda * std::pow(v, alpha));
          a0 += base;
          a1 += base * frac;
        }
        w0[off + i] = a0;
        w1[off + i] = a1;
      } else {
        w0[off + i] = f1[i] - f1[i + 1];
        w1[off + i] = (f2[i] - f2[i + 1]) / h - f1[i + 1];
      }
    }
  }
}

std::vector<int> snap_indices(const TimeGrid& grid,
                              const std::vector<double>& times,
                              double* max_snap_error) {
  std::vector<int> idx(times.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double tau = times[k];
    int best = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= grid.intervals; ++j) {
      const double d = std::abs(grid.nodes[j] - tau);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    idx[k] = best;
    worst = std::max(worst, best_dist);
  }
  if (max_snap_error) *max_snap_error = worst;
  return idx;
}

double modal_tail_fraction(const Trajectory& u) {
  if (u.states.size() < 2) return 0.0;
  const int n = static_cast<int>(u.states[1].size());
  const int tail_start = 3 * n / 4;
  double worst = 0.0;
  for (std::size_t j = 1; j < u.states.size(); ++j) {
    const auto& c = u.states[j].coefficients;
    double total = 0.0;
    double tail = 0.0;
    for (int k = 0; k < n; ++k) {
      total += c[k] * c[k];
      if (k >= tail_start) tail += c[k] * c[k];
    }
    if (total > 0.0) worst = std::max(worst, std::sqrt(tail / total));
  }
  return worst;
}

}  // namespace

void ProblemSpec::validate() const {
  params.validate();
  op.validate();
  if (grid.nodes.size() != static_cast<std::size_t>(grid.intervals) + 1 ||
      grid.intervals < 2) {
    throw std::invalid_argument("ProblemSpec: grid is not initialized");
  }
  if (std::abs(grid.horizon - params.horizon_T) >
      1e-12 * std::max(1.0, params.horizon_T)) {
    throw std::invalid_argument("ProblemSpec: grid horizon differs from horizon_T");
  }
  if (u0.size() != static_cast<std::size_t>(op.mode_count)) {
    throw std::invalid_argument("ProblemSpec: u0 size does not match mode count");
  }
  for (double c : u0.coefficients) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("ProblemSpec: u0 has non-finite coefficients");
    }
  }
  if (nonlocal_times.size() != nonlocal_weights.size()) {
    throw std::invalid_argument(
        "ProblemSpec: nonlocal times and weights differ in length");
  }
  for (double tau : nonlocal_times) {
    if (!(tau > 0.0) || !(tau <= params.horizon_T)) {
      throw std::invalid_argument("ProblemSpec: nonlocal time outside (0, T]");
    }
  }
  if (!(bounds.delta_decay >= 0.0)) {
    throw std::invalid_argument("ProblemSpec: delta_decay must be >= 0");
  }
}

void SolverConfig::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("SolverConfig: tolerance must be positive");
  }
  if (!(relaxation > 0.0) || !(relaxation <= 1.0)) {
    throw std::invalid_argument("SolverConfig: relaxation must lie in (0, 1]");
  }
  if (quadrature_order < 2) {
    throw std::invalid_argument("SolverConfig: quadrature_order must be >= 2");
  }
  if (!(radius_r > 0.0)) {
    throw std::invalid_argument("SolverConfig: radius_r must be positive");
  }
}

double Trajectory::weighted_norm() const {
  double worst = states.empty() ? 0.0 : states[0].l2_norm();
  for (std::size_t j = 1; j < states.size(); ++j) {
    worst = std::max(worst,
                     std::pow(grid.nodes[j], weight_exponent) * states[j].l2_norm());
  }
  return worst;
}

double weighted_distance(const Trajectory& a, const Trajectory& b) {
  if (!same_mesh(a.grid, b.grid) || a.states.size() != b.states.size()) {
    throw std::invalid_argument("weighted_distance: trajectories on different meshes");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    double sum = 0.0;
    for (std::size_t n = 0; n < a.states[j].size(); ++n) {
      const double d = a.states[j].coefficients[n] - b.states[j].coefficients[n];
      sum += d * d;
    }
    const double norm = std::sqrt(0.5 * kPi * sum);
    const double weight =
        j == 0 ? 1.0 : std::pow(a.grid.nodes[j], a.weight_exponent);
    worst = std::max(worst, weight * norm);
  }
  return worst;
}

struct PicardOperator::Impl {
  ProblemSpec spec;
  SolverConfig config;
  int threads = 1;
  double weight = 0.0;
  bool origin_real = false;
  SineTransform st;
  // s_mult[j * N + n]: S_{a,g} multiplier at node j, eigenvalue lambda_n.
  std::vector<double> s_mult;
  std::vector<int> snap_idx;
  double snap_err = 0.0;
  bool has_g = false;
  std::vector<std::vector<double>> conv_w0;
  std::vector<std::vector<double>> conv_w1;

  Impl(const ProblemSpec& s, const SolverConfig& c)
      : spec(s), config(c), st(s.op.mode_count) {}
};

PicardOperator::PicardOperator(const ProblemSpec& spec,
                               const SolverConfig& config)
    : impl_(std::make_unique<Impl>(spec, config)) {
  spec.validate();
  config.validate();
  Impl& im = *impl_;
  im.threads = resolve_threads(config.threads);
  im.weight = spec.params.weight_exponent();
  im.origin_real = spec.params.gamma_type == 1.0;
  im.has_g = static_cast<bool>(spec.g);

  const int m = spec.grid.intervals;
  const int n_modes = spec.op.mode_count;
  const double alpha = spec.params.alpha;
  const double gamma_type = spec.params.gamma_type;
  im.s_mult.assign(static_cast<std::size_t>(m + 1) * n_modes,
                   im.origin_real ? 1.0 : 0.0);
  if (config.linear_term_path == LinearTermPath::direct) {
    const MittagLeffler ml(MLParams{alpha, alpha + gamma_type * (1.0 - alpha)});
    const double pre = (alpha - 1.0) * (1.0 - gamma_type);
    parallel_for(n_modes, im.threads, [&](int n) {
      const double lambda = spec.op.eigenvalues[n];
      for (int j = 1; j <= m; ++j) {
        const double t = spec.grid.nodes[j];
        im.s_mult[static_cast<std::size_t>(j) * n_modes + n] =
            std::pow(t, pre) * ml(-lambda * std::pow(t, alpha));
      }
    });
  } else {
    parallel_for(n_modes, im.threads, [&](int n) {
      const SampledFn q = s_alpha_gamma_multiplier_quadrature(
          spec.params, spec.op.eigenvalues[n], spec.grid);
      for (int j = 1; j <= m; ++j) {
        im.s_mult[static_cast<std::size_t>(j) * n_modes + n] = q.values[j];
      }
    });
  }
  if (!spec.nonlocal_times.empty()) {
    im.snap_idx = snap_indices(spec.grid, spec.nonlocal_times, &im.snap_err);
  }
  if (im.has_g) {
    const QuadRule gl = gauss_legendre(config.quadrature_order);
    const MittagLeffler ml_k(MLParams{alpha, alpha});
    const MittagLeffler ml_f1(MLParams{alpha, alpha + 1.0});
    const MittagLeffler ml_f2(MLParams{alpha, alpha + 2.0});
    im.conv_w0.resize(n_modes);
    im.conv_w1.resize(n_modes);
    parallel_for(n_modes, im.threads, [&](int n) {
      build_conv_weights(spec.grid, alpha, spec.op.eigenvalues[n], gl, ml_k,
                         ml_f1, ml_f2, im.conv_w0[n], im.conv_w1[n]);
    });
  }
}

PicardOperator::PicardOperator(PicardOperator&&) noexcept = default;
PicardOperator& PicardOperator::operator=(PicardOperator&&) noexcept = default;
PicardOperator::~PicardOperator() = default;

double PicardOperator::snap_error() const { return impl_->snap_err; }

SpectralField PicardOperator::nonlocal_field(const Trajectory& u) const {
  const Impl& im = *impl_;
  SpectralField h = SpectralField::zero(im.spec.op.mode_count);
  for (std::size_t k = 0; k < im.snap_idx.size(); ++k) {
    const double c = im.spec.nonlocal_weights[k];
    const auto& state = u.states[im.snap_idx[k]].coefficients;
    for (std::size_t n = 0; n < state.size(); ++n) {
      h.coefficients[n] += c * state[n];
    }
  }
  return h;
}

Trajectory PicardOperator::initial_trajectory() const {
  const Impl& im = *impl_;
  const int m = im.spec.grid.intervals;
  const int n_modes = im.spec.op.mode_count;
  Trajectory u;
  u.grid = im.spec.grid;
  u.weight_exponent = im.weight;
  u.states.assign(m + 1, SpectralField::zero(n_modes));
  for (int j = im.origin_real ? 0 : 1; j <= m; ++j) {
    for (int n = 0; n < n_modes; ++n) {
      u.states[j].coefficients[n] =
          im.s_mult[static_cast<std::size_t>(j) * n_modes + n] *
          im.spec.u0.coefficients[n];
    }
  }
  return u;
}

Trajectory PicardOperator::apply(const Trajectory& u) const {
  const Impl& im = *impl_;
  if (!same_mesh(u.grid, im.spec.grid) ||
      u.states.size() != static_cast<std::size_t>(im.spec.grid.intervals) + 1) {
    throw std::invalid_argument("PicardOperator: trajectory mesh mismatch");
  }
  const int m = im.spec.grid.intervals;
  const int n_modes = im.spec.op.mode_count;

  const SpectralField h = nonlocal_field(u);
  std::vector<double> data0(n_modes);
  for (int n = 0; n < n_modes; ++n) {
    data0[n] = im.spec.u0.coefficients[n] - h.coefficients[n];
  }
  const ForcingResult forcing = compute_forcing(im.spec, im.st, u, im.threads);

  Trajectory out;
  out.grid = im.spec.grid;
  out.weight_exponent = im.weight;
  out.states.assign(m + 1, SpectralField::zero(n_modes));
  if (im.origin_real) out.states[0].coefficients = data0;

  const bool use_conv = im.has_g && !forcing.all_zero;
  parallel_for(n_modes, im.threads, [&](int n) {
    const std::vector<double>* w0 = use_conv ? &im.conv_w0[n] : nullptr;
    const std::vector<double>* w1 = use_conv ? &im.conv_w1[n] : nullptr;
    for (int j = 1; j <= m; ++j) {
      double value =
          im.s_mult[static_cast<std::size_t>(j) * n_modes + n] * data0[n];
      if (use_conv) {
        const std::size_t off = static_cast<std::size_t>(j) * (j - 1) / 2;
        double acc = 0.0;
        for (int i = 0; i < j; ++i) {
          const double gl_val = i == 0 && !im.origin_real
                                    ? forcing.g_modal[1][n]
                                    : forcing.g_modal[i][n];
          const double gr_val = forcing.g_modal[i + 1][n];
          acc += (*w0)[off + i] * gl_val + (*w1)[off + i] * (gr_val - gl_val);
        }
        value += acc;
      }
      out.states[j].coefficients[n] = value;
    }
  });
  return out;
}

SpectralField b_term(const ProblemSpec& spec, const Trajectory& traj,
                     int t_index) {
  spec.validate();
  if (t_index < 1 || t_index > traj.grid.intervals) {
    throw std::invalid_argument("b_term: t_index out of range");
  }
  SpectralField out = SpectralField::zero(spec.op.mode_count);
  if (!spec.f || !spec.kernel_k) return out;
  const SineTransform st(spec.op.mode_count);
  const int threads = resolve_threads(0);
  const std::vector<std::vector<double>> f_phys =
      sample_inner_f(spec, st, traj, threads);
  const std::vector<double> b_phys =
      b_phys_at(spec, st, f_phys, traj.grid, t_index);
  st.analyze(b_phys, out.coefficients);
  return out;
}

SpectralField nonlocal_h(const ProblemSpec& spec, const Trajectory& traj) {
  spec.validate();
  SpectralField h = SpectralField::zero(spec.op.mode_count);
  if (spec.nonlocal_times.empty()) return h;
  const std::vector<int> idx = snap_indices(traj.grid, spec.nonlocal_times, nullptr);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double c = spec.nonlocal_weights[k];
    const auto& state = traj.states[idx[k]].coefficients;
    for (std::size_t n = 0; n < state.size(); ++n) {
      h.coefficients[n] += c * state[n];
    }
  }
  return h;
}

Trajectory picard_map(const ProblemSpec& spec, const Trajectory& traj,
                      const SolverConfig& config) {
  return PicardOperator(spec, config).apply(traj);
}

namespace {

Trajectory damped_combine(const Trajectory& u, const Trajectory& pu,
                          double omega) {
  Trajectory next = u;
  for (std::size_t j = 0; j < u.states.size(); ++j) {
    for (std::size_t n = 0; n < u.states[j].size(); ++n) {
      next.states[j].coefficients[n] =
          (1.0 - omega) * u.states[j].coefficients[n] +
          omega * pu.states[j].coefficients[n];
    }
  }
  return next;
}

// Sharp realizable form of the self-mapping condition: bound P y over the
// ball by the lambda_1 multipliers and the (H2) forcing envelope, then
// compare the weighted sup with the configured radius.
double h4_required_radius(const ProblemSpec& spec, const SolverConfig& config) {
  const double alpha = spec.params.alpha;
  const double w = spec.params.weight_exponent();
  const double lambda1 = spec.op.eigenvalues[0];
  const double data_bound = spec.u0.l2_norm() + spec.bounds.h_bound;

  const MittagLeffler ml_s(
      MLParams{alpha, alpha + spec.params.gamma_type * (1.0 - alpha)});
  const double pre = (alpha - 1.0) * (1.0 - spec.params.gamma_type);

  std::vector<double> w0;
  std::vector<double> w1;
  const QuadRule gl = gauss_legendre(config.quadrature_order);
  const MittagLeffler ml_t(MLParams{alpha, alpha});
  const MittagLeffler ml_f1(MLParams{alpha, alpha + 1.0});
  const MittagLeffler ml_f2(MLParams{alpha, alpha + 2.0});
  build_conv_weights(spec.grid, alpha, lambda1, gl, ml_t, ml_f1, ml_f2, w0, w1);

  const auto envelope = [&](double t) {
    return spec.bounds.k1 + spec.bounds.k2 * std::exp(-spec.bounds.delta_decay * t);
  };
  double required = 0.0;
  const int m = spec.grid.intervals;
  for (int j = 1; j <= m; ++j) {
    const double t = spec.grid.nodes[j];
    const double s_norm =
        std::pow(t, pre) * ml_s(-lambda1 * std::pow(t, alpha));
    double conv = 0.0;
    const std::size_t off = static_cast<std::size_t>(j) * (j - 1) / 2;
    for (int i = 0; i < j; ++i) {
      const double el = envelope(spec.grid.nodes[i]);
      const double er = envelope(spec.grid.nodes[i + 1]);
      conv += w0[off + i] * el + w1[off + i] * (er - el);
    }
    required = std::max(required, std::pow(t, w) * (s_norm * data_bound + conv));
  }
  return required;
}

}  // namespace

std::pair<Trajectory, ResidualReport> solve(const ProblemSpec& spec,
                                            const SolverConfig& config) {
  const PicardOperator map(spec, config);
  ResidualReport report;

  report.hypothesis_checks.h4_required_radius = h4_required_radius(spec, config);
  report.hypothesis_checks.h4_pass =
      report.hypothesis_checks.h4_required_radius <= config.radius_r;

  Trajectory u = map.initial_trajectory();
  Trajectory best = u;
  double best_update = std::numeric_limits<double>::infinity();
  bool omega_ok = true;
  const double omega = config.relaxation;

  for (int k = 1; k <= config.max_iterations; ++k) {
    const Trajectory pu = map.apply(u);
    Trajectory next = damped_combine(u, pu, omega);
    const double update = weighted_distance(next, u);
    report.update_history.push_back(update);
    report.iterations_used = k;
    report.final_update_norm = update;
    if (report.hypothesis_checks.h4_pass &&
        next.weighted_norm() > config.radius_r * (1.0 + 1e-9)) {
      omega_ok = false;
    }
    u = std::move(next);
    if (update < best_update) {
      best_update = update;
      best = u;
    }
    if (update <= config.tolerance) {
      report.converged = true;
      break;
    }
    const std::size_t count = report.update_history.size();
    if (count >= 6) {
      bool growing = true;
      for (std::size_t i = count - 5; i < count; ++i) {
        growing = growing &&
                  report.update_history[i] > report.update_history[i - 1];
      }
      if (growing &&
          report.update_history[count - 1] >
              10.0 * report.update_history[count - 6]) {
        throw divergence_error("solve: update norm grew tenfold over five iterations",
                               report.update_history);
      }
    }
  }
  if (!report.converged) {
    u = best;
    report.final_update_norm = best_update;
  }
  report.omega_r_maintained = omega_ok;

  const Trajectory pu = map.apply(u);
  report.mild_self_consistency = weighted_distance(pu, u);
  report.volterra_residual_weighted = volterra_residual(spec, u);
  report.snap_error = map.snap_error();
  report.modal_tail = modal_tail_fraction(u);

  const SineTransform st(spec.op.mode_count);
  const ForcingResult forcing =
      compute_forcing(spec, st, u, resolve_threads(config.threads));
  double h2_slack = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= spec.grid.intervals; ++j) {
    const double bound =
        spec.bounds.k1 +
        spec.bounds.k2 * std::exp(-spec.bounds.delta_decay * spec.grid.nodes[j]);
    h2_slack = std::min(h2_slack, bound - forcing.g_norms[j]);
  }
  report.hypothesis_checks.h2_slack = h2_slack;
  report.hypothesis_checks.h2_pass = h2_slack >= 0.0;

  const SpectralField h = map.nonlocal_field(u);
  report.hypothesis_checks.h3_slack = spec.bounds.h_bound - h.l2_norm();
  report.hypothesis_checks.h3_pass = report.hypothesis_checks.h3_slack >= 0.0;

  return {std::move(u), std::move(report)};
}

double volterra_residual(const ProblemSpec& spec, const Trajectory& traj) {
  spec.validate();
  const int m = traj.grid.intervals;
  const int n_modes = spec.op.mode_count;
  const double alpha = spec.params.alpha;
  const double gamma_type = spec.params.gamma_type;
  const double w = spec.params.weight_exponent();
  const int threads = resolve_threads(0);

  const SineTransform st(n_modes);
  const ForcingResult forcing = compute_forcing(spec, st, traj, threads);
  const SpectralField h = nonlocal_h(spec, traj);

  const double mu_gamma = gamma(gamma_type * (1.0 - alpha) + alpha);
  const double mu_exponent = (1.0 - alpha) * (gamma_type - 1.0);
  const bool singular = gamma_type < 1.0;

  std::vector<std::vector<double>> mismatch(
      m + 1, std::vector<double>(n_modes, 0.0));
  parallel_for(n_modes, threads, [&](int n) {
    const double lambda = spec.op.eigenvalues[n];
    SampledFn phi;
    phi.grid = traj.grid;
    phi.singular_origin = singular;
    phi.singular_exponent = singular ? (alpha - 1.0) * (1.0 - gamma_type) : 0.0;
    phi.values.assign(m + 1, 0.0);
    for (int j = singular ? 1 : 0; j <= m; ++j) {
      phi.values[j] = -lambda * traj.states[j].coefficients[n] +
                      forcing.g_modal[j][n];
    }
    const SampledFn integral = rl_integral(alpha, phi);
    const double data0 = spec.u0.coefficients[n] - h.coefficients[n];
    for (int j = 1; j <= m; ++j) {
      const double mu = std::pow(traj.grid.nodes[j], mu_exponent) / mu_gamma;
      const double rhs = mu * data0 + integral.values[j];
      mismatch[j][n] = rhs - traj.states[j].coefficients[n];
    }
  });
  double worst = 0.0;
  for (int j = 1; j <= m; ++j) {
    worst = std::max(worst,
                     std::pow(traj.grid.nodes[j], w) * field_l2(mismatch[j]));
  }
  return worst;
}

DefectTable equicontinuity_probe(const ProblemSpec& spec,
                                 const std::vector<Trajectory>& traj_samples,
                                 const std::vector<double>& gap_buckets) {
  if (traj_samples.empty() || gap_buckets.empty()) {
    throw std::invalid_argument("equicontinuity_probe: empty input");
  }
  const PicardOperator map(spec);
  const double w = spec.params.weight_exponent();
  const int m = spec.grid.intervals;
  const double horizon = spec.params.horizon_T;

  const auto nearest = [&](double t) {
    int best = 1;
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= m; ++j) {
      const double d = std::abs(spec.grid.nodes[j] - t);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    return best;
  };

  std::vector<std::vector<std::vector<double>>> weighted;
  weighted.reserve(traj_samples.size());
  for (const Trajectory& y : traj_samples) {
    const Trajectory py = map.apply(y);
    std::vector<std::vector<double>> wf(m + 1);
    wf[0] = py.states[0].coefficients;
    for (int j = 1; j <= m; ++j) {
      wf[j] = py.states[j].coefficients;
      const double scale = std::pow(spec.grid.nodes[j], w);
      for (double& c : wf[j]) c *= scale;
    }
    weighted.push_back(std::move(wf));
  }

  const auto defect = [&](const std::vector<std::vector<double>>& wf, int j1,
                          int j2) {
    double sum = 0.0;
    for (std::size_t n = 0; n < wf[j1].size(); ++n) {
      const double d = wf[j2][n] - wf[j1][n];
      sum += d * d;
    }
    return std::sqrt(0.5 * kPi * sum);
  };

  DefectTable table;
  table.gaps = gap_buckets;
  table.max_defects.assign(gap_buckets.size(), 0.0);
  table.origin_defects.assign(gap_buckets.size(), 0.0);
  const double anchors[] = {0.3 * horizon, 0.5 * horizon};
  for (std::size_t b = 0; b < gap_buckets.size(); ++b) {
    const double gap = gap_buckets[b];
    for (const auto& wf : weighted) {
      const int j_origin = 1;
      const int j_origin_hi = nearest(spec.grid.nodes[1] + gap);
      const double origin_defect = defect(wf, j_origin, j_origin_hi);
      table.origin_defects[b] = std::max(table.origin_defects[b], origin_defect);
      table.max_defects[b] = std::max(table.max_defects[b], origin_defect);
      for (double anchor : anchors) {
        if (anchor + gap > horizon) continue;
        const int j1 = nearest(anchor);
        const int j2 = nearest(anchor + gap);
        table.max_defects[b] =
            std::max(table.max_defects[b], defect(wf, j1, j2));
      }
    }
  }
  return table;
}

Trajectory random_ball_trajectory(const ProblemSpec& spec, double radius,
                                  unsigned seed) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("random_ball_trajectory: radius must be positive");
  }
  const int m = spec.grid.intervals;
  const int n_modes = spec.op.mode_count;
  // mt19937 output is standardized; avoid std distributions so samples are
  // reproducible across standard libraries.
  std::mt19937 rng(seed);
  const auto u01 = [&rng] { return rng() / 4294967296.0; };

  Trajectory u;
  u.grid = spec.grid;
  u.weight_exponent = spec.params.weight_exponent();
  u.states.assign(m + 1, SpectralField::zero(n_modes));
  std::vector<double> amp(n_modes);
  std::vector<double> freq(n_modes);
  std::vector<double> phase(n_modes);
  for (int n = 0; n < n_modes; ++n) {
    amp[n] = (2.0 * u01() - 1.0) / ((n + 1.0) * (n + 1.0));
    freq[n] = 0.5 + 2.5 * u01();
    phase[n] = 2.0 * kPi * u01();
  }
  const bool origin_real = spec.params.gamma_type == 1.0;
  for (int j = origin_real ? 0 : 1; j <= m; ++j) {
    const double t = spec.grid.nodes[j];
    for (int n = 0; n < n_modes; ++n) {
      u.states[j].coefficients[n] = amp[n] * std::cos(freq[n] * t + phase[n]);
    }
  }
  const double norm = u.weighted_norm();
  if (norm > 0.0) {
    const double scale = 0.8 * radius / norm;
    for (auto& state : u.states) {
      for (double& c : state.coefficients) c *= scale;
    }
  }
  return u;
}

ContractionSequence mnc_contraction_sequence(const FracParams& params,
                                             double c_p, double k_lip,
                                             int n_max) {
  params.validate();
  if (!(c_p > 0.0) || !(k_lip > 0.0)) {
    throw std::invalid_argument("mnc_contraction_sequence: constants must be positive");
  }
  if (n_max < 1) {
    throw std::invalid_argument("mnc_contraction_sequence: n_max must be >= 1");
  }
  const double nab = -params.alpha * params.beta_sect;
  const double tail = params.gamma_type * (1.0 + params.alpha * params.beta_sect);
  if (!(nab > 0.0) || !(nab + tail > 0.0)) {
    throw std::domain_error("mnc_contraction_sequence: gamma argument not positive");
  }
  const double per_step =
      std::log(4.0 * c_p * k_lip) + nab * std::log(params.horizon_T) +
      std::lgamma(nab);
  const double numerator = std::lgamma(nab + tail);

  ContractionSequence seq;
  seq.values.reserve(n_max);
  seq.log_values.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const double log_a =
        n * per_step + numerator - std::lgamma((n + 1.0) * nab + tail);
    seq.log_values.push_back(log_a);
    seq.values.push_back(std::exp(log_a));
    if (!seq.n0 && log_a < 0.0) seq.n0 = n;
  }
  return seq;
}

}  // namespace hilfer
