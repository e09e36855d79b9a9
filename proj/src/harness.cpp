#include "hilfer/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hilfer/quadrature.hpp"
#include "hilfer/specfun.hpp"

namespace hilfer {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kResidualCap = 1e-3;

std::string fmt_num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_num(values[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct RawValue {
  std::string text;
  int line = 0;
};

using KeyMap = std::map<std::string, RawValue>;

KeyMap tokenize(const std::string& text) {
  KeyMap kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw config_error("line " + std::to_string(ln) +
                           ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw config_error("line " + std::to_string(ln) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(ln) +
                         ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw config_error("line " + std::to_string(ln) + ": empty key");
    }
    const std::string full =
        key.find('.') != std::string::npos || section.empty()
            ? key
            : section + "." + key;
    kv[full] = {value, ln};
  }
  return kv;
}

// Pulls typed values out of the key map, collecting every violation so the
// caller can report them all at once.
struct FieldReader {
  const KeyMap& kv;
  std::vector<std::string>& violations;
  std::set<std::string> consumed;

  const RawValue* find(const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    consumed.insert(key);
    return &it->second;
  }

  bool parse_double(const RawValue& raw, const std::string& key, double* out) {
    const std::string& s = raw.text;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
      violations.push_back(key + ": not a number (line " +
                           std::to_string(raw.line) + ")");
      return false;
    }
    *out = v;
    return true;
  }

  double number(const std::string& key, bool required, double fallback) {
    const RawValue* raw = find(key);
    if (!raw) {
      if (required) violations.push_back(key + ": missing");
      return fallback;
    }
    double v = fallback;
    parse_double(*raw, key, &v);
    return v;
  }

  int integer(const std::string& key, bool required, int fallback) {
    const double v = number(key, required, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      violations.push_back(key + ": expected an integer");
      return fallback;
    }
    return i;
  }

  std::string word(const std::string& key, const std::string& fallback) {
    const RawValue* raw = find(key);
    return raw ? raw->text : fallback;
  }

  std::vector<double> list(const std::string& key) {
    const RawValue* raw = find(key);
    std::vector<double> out;
    if (!raw) return out;
    std::istringstream in(raw->text);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) {
        violations.push_back(key + ": empty list entry (line " +
                             std::to_string(raw->line) + ")");
        continue;
      }
      double v = 0.0;
      if (parse_double({item, raw->line}, key, &v)) out.push_back(v);
    }
    return out;
  }
};

Scenario builtin_sec5() {
  Scenario s;
  s.alpha = 0.75;
  s.gamma_type = 0.5;
  s.beta_sect = -0.5;
  s.horizon = 1.0;
  s.modes = 32;
  s.shift = 0.0;
  s.nodes = 200;
  s.grading = 3.0;
  s.max_iterations = 50;
  s.tolerance = 1e-8;
  s.relaxation = 0.8;
  s.radius_r = 6.0;
  s.quadrature_order = 6;
  s.linear_path = "direct";
  s.kind = "sec5";
  s.initial_coeffs = {1.0};
  s.nonlocal_times = {0.3, 0.6};
  s.nonlocal_weights = {0.05, 0.05};
  s.k1 = 5.0;
  s.k2 = 0.0;
  s.delta_decay = 1.0;
  s.k_bound_h3 = 0.2;
  s.output_points = 64;
  s.csv_name = "trajectory.csv";
  return s;
}

Scenario builtin_linear() {
  Scenario s;
  s.alpha = 0.75;
  s.gamma_type = 0.5;
  s.beta_sect = -0.5;
  s.horizon = 1.0;
  s.modes = 16;
  s.shift = 0.0;
  s.nodes = 400;
  s.grading = 2.0;
  s.max_iterations = 50;
  s.tolerance = 1e-8;
  s.relaxation = 0.8;
  s.radius_r = 6.0;
  s.quadrature_order = 6;
  s.linear_path = "direct";
  s.kind = "linear";
  s.initial_coeffs = {1.0};
  s.nonlocal_times = {};
  s.nonlocal_weights = {};
  s.k1 = 0.0;
  s.k2 = 0.0;
  s.delta_decay = 1.0;
  s.k_bound_h3 = 0.2;
  s.output_points = 32;
  s.csv_name = "linear.csv";
  return s;
}

void validate_scenario(const Scenario& s, std::vector<std::string>& violations) {
  const auto bad = [&](const std::string& msg) { violations.push_back(msg); };
  if (!(s.alpha > 0.0) || !(s.alpha < 1.0)) {
    bad("fracparams.alpha must lie in (0, 1)");
  }
  if (!(s.gamma_type >= 0.0) || !(s.gamma_type <= 1.0)) {
    bad("fracparams.gamma must lie in [0, 1]");
  }
  if (!(s.beta_sect > -1.0) || !(s.beta_sect < 0.0)) {
    bad("fracparams.beta must lie in (-1, 0)");
  }
  if (!(s.horizon > 0.0)) bad("fracparams.T must be positive");
  if (s.modes < 1) bad("operator.modes must be >= 1");
  if (!(s.shift >= 0.0)) bad("operator.shift must be >= 0");
  if (s.nodes < 2) bad("mesh.nodes must be >= 2");
  if (!(s.grading >= 1.0)) bad("mesh.grading must be >= 1");
  if (s.max_iterations < 1) bad("picard.max_iter must be >= 1");
  if (!(s.tolerance > 0.0)) bad("picard.tol must be positive");
  if (!(s.relaxation > 0.0) || !(s.relaxation <= 1.0)) {
    bad("picard.relaxation must lie in (0, 1]");
  }
  if (!(s.radius_r > 0.0)) bad("picard.radius_r must be positive");
  if (s.quadrature_order < 2) bad("picard.quadrature_order must be >= 2");
  if (s.linear_path != "direct" && s.linear_path != "quadrature") {
    bad("picard.path must be 'direct' or 'quadrature'");
  }
  if (s.kind != "sec5" && s.kind != "linear") {
    bad("problem.kind must be 'sec5' or 'linear'");
  }
  if (s.initial_coeffs.size() > static_cast<std::size_t>(std::max(s.modes, 0))) {
    bad("initial.coeffs has more entries than operator.modes");
  }
  for (double c : s.initial_coeffs) {
    if (!std::isfinite(c)) {
      bad("initial.coeffs has a non-finite entry");
      break;
    }
  }
  if (s.nonlocal_times.size() != s.nonlocal_weights.size()) {
    bad("nonlocal.times and nonlocal.weights differ in length");
  }
  for (double tau : s.nonlocal_times) {
    if (!(tau > 0.0) || !(tau <= s.horizon)) {
      bad("nonlocal.times must lie in (0, T]");
      break;
    }
  }
  if (!(s.k_bound_h3 >= 0.0)) bad("bounds.k_bound_h3 must be >= 0");
  if (!(s.delta_decay >= 0.0)) bad("bounds.delta_decay must be >= 0");
  if (s.output_points < 1) bad("output.points must be >= 1");
  if (s.csv_name.empty()) bad("output.csv must not be empty");
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  const KeyMap kv = tokenize(text);
  std::vector<std::string> violations;
  FieldReader r{kv, violations, {}};
  Scenario s;
  s.alpha = r.number("fracparams.alpha", true, s.alpha);
  s.gamma_type = r.number("fracparams.gamma", true, s.gamma_type);
  s.beta_sect = r.number("fracparams.beta", true, s.beta_sect);
  s.horizon = r.number("fracparams.T", true, s.horizon);
  s.modes = r.integer("operator.modes", true, s.modes);
  s.shift = r.number("operator.shift", false, s.shift);
  s.nodes = r.integer("mesh.nodes", true, s.nodes);
  s.grading = r.number("mesh.grading", true, s.grading);
  s.max_iterations = r.integer("picard.max_iter", false, s.max_iterations);
  s.tolerance = r.number("picard.tol", false, s.tolerance);
  s.relaxation = r.number("picard.relaxation", false, s.relaxation);
  s.radius_r = r.number("picard.radius_r", false, s.radius_r);
  s.quadrature_order = r.integer("picard.quadrature_order", false, s.quadrature_order);
  s.linear_path = r.word("picard.path", s.linear_path);
  s.kind = r.word("problem.kind", s.kind);
  if (kv.count("initial.coeffs")) {
    s.initial_coeffs = r.list("initial.coeffs");
  }
  s.nonlocal_times = r.list("nonlocal.times");
  s.nonlocal_weights = r.list("nonlocal.weights");
  s.k1 = r.number("bounds.k1", false, s.k1);
  s.k2 = r.number("bounds.k2", false, s.k2);
  s.delta_decay = r.number("bounds.delta_decay", false, s.delta_decay);
  s.k_bound_h3 = r.number("bounds.k_bound_h3", false, s.k_bound_h3);
  s.output_points = r.integer("output.points", false, s.output_points);
  s.csv_name = r.word("output.csv", s.csv_name);

  for (const auto& [key, raw] : kv) {
    if (!r.consumed.count(key)) {
      violations.push_back("unknown key '" + key + "' (line " +
                           std::to_string(raw.line) + ")");
    }
  }
  validate_scenario(s, violations);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& v : violations) msg += "\n  - " + v;
    throw config_error(msg);
  }
  return s;
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (path_or_builtin == "example-sec5") return builtin_sec5();
  if (path_or_builtin == "linear") return builtin_linear();
  std::ifstream in(path_or_builtin, std::ios::binary);
  if (!in) {
    throw config_error("cannot open scenario file '" + path_or_builtin + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[fracparams]\n";
  out << "alpha = " << fmt_num(s.alpha) << "\n";
  out << "gamma = " << fmt_num(s.gamma_type) << "\n";
  out << "beta = " << fmt_num(s.beta_sect) << "\n";
  out << "T = " << fmt_num(s.horizon) << "\n\n";
  out << "[operator]\n";
  out << "modes = " << s.modes << "\n";
  out << "shift = " << fmt_num(s.shift) << "\n\n";
  out << "[mesh]\n";
  out << "nodes = " << s.nodes << "\n";
  out << "grading = " << fmt_num(s.grading) << "\n\n";
  out << "[picard]\n";
  out << "max_iter = " << s.max_iterations << "\n";
  out << "tol = " << fmt_num(s.tolerance) << "\n";
  out << "relaxation = " << fmt_num(s.relaxation) << "\n";
  out << "radius_r = " << fmt_num(s.radius_r) << "\n";
  out << "quadrature_order = " << s.quadrature_order << "\n";
  out << "path = " << s.linear_path << "\n\n";
  out << "[problem]\n";
  out << "kind = " << s.kind << "\n\n";
  out << "[initial]\n";
  out << "coeffs = " << fmt_list(s.initial_coeffs) << "\n\n";
  if (!s.nonlocal_times.empty()) {
    out << "[nonlocal]\n";
    out << "times = " << fmt_list(s.nonlocal_times) << "\n";
    out << "weights = " << fmt_list(s.nonlocal_weights) << "\n\n";
  }
  out << "[bounds]\n";
  out << "k1 = " << fmt_num(s.k1) << "\n";
  out << "k2 = " << fmt_num(s.k2) << "\n";
  out << "delta_decay = " << fmt_num(s.delta_decay) << "\n";
  out << "k_bound_h3 = " << fmt_num(s.k_bound_h3) << "\n\n";
  out << "[output]\n";
  out << "points = " << s.output_points << "\n";
  out << "csv = " << s.csv_name << "\n";
  return out.str();
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write scenario file '" + path + "'");
  out << serialize_scenario(scenario);
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string bytes = serialize_scenario(scenario);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProblemSpec make_problem(const Scenario& sc) {
  ProblemSpec spec;
  spec.params.alpha = sc.alpha;
  spec.params.gamma_type = sc.gamma_type;
  spec.params.beta_sect = sc.beta_sect;
  spec.params.horizon_T = sc.horizon;
  spec.op = DiagonalSectorialOperator::dirichlet_laplacian(sc.modes, sc.shift);
  spec.grid = TimeGrid::graded(sc.horizon, sc.nodes, sc.grading);
  spec.u0 = SpectralField::zero(sc.modes);
  for (std::size_t i = 0;
       i < sc.initial_coeffs.size() && i < spec.u0.size(); ++i) {
    spec.u0.coefficients[i] = sc.initial_coeffs[i];
  }
  if (sc.kind == "sec5") {
    spec.g = [](double, double y, double u, double bu) {
      return y * std::cos(u) + bu;
    };
    spec.f = [](double, double, double u) { return std::sin(u); };
    spec.kernel_k = [](double t, double s) { return std::exp(-(t - s)); };
  } else if (sc.kind != "linear") {
    throw config_error("problem.kind must be 'sec5' or 'linear'");
  }
  spec.nonlocal_times = sc.nonlocal_times;
  spec.nonlocal_weights = sc.nonlocal_weights;
  spec.bounds.k1 = sc.k1;
  spec.bounds.k2 = sc.k2;
  spec.bounds.delta_decay = sc.delta_decay;
  spec.bounds.h_bound = sc.k_bound_h3;
  return spec;
}

SolverConfig make_solver_config(const Scenario& sc) {
  SolverConfig cfg;
  cfg.max_iterations = sc.max_iterations;
  cfg.tolerance = sc.tolerance;
  cfg.relaxation = sc.relaxation;
  cfg.quadrature_order = sc.quadrature_order;
  cfg.radius_r = sc.radius_r;
  cfg.threads = 0;
  cfg.linear_term_path = sc.linear_path == "quadrature"
                             ? LinearTermPath::quadrature
                             : LinearTermPath::direct;
  return cfg;
}

RunArtifact run_scenario(const Scenario& sc, const std::string& out_dir) {
  const ProblemSpec spec = make_problem(sc);
  const SolverConfig cfg = make_solver_config(sc);
  auto [traj, report] = solve(spec, cfg);

  RunArtifact art;
  art.report = report;
  art.config_hash = scenario_hash(sc);
  art.under_resolved = report.volterra_residual_weighted > kResidualCap;

  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  const std::string prefix = out_dir.empty() ? "" : out_dir + "/";
  art.csv_path = prefix + sc.csv_name;
  const auto dot = sc.csv_name.rfind('.');
  const std::string stem =
      dot == std::string::npos ? sc.csv_name : sc.csv_name.substr(0, dot);
  art.report_path = prefix + stem + ".report.txt";

  const int points = sc.output_points;
  std::vector<double> synth_table(static_cast<std::size_t>(points) * sc.modes);
  for (int p = 0; p < points; ++p) {
    const double y = (p + 1) * kPi / (points + 1);
    for (int n = 0; n < sc.modes; ++n) {
      synth_table[static_cast<std::size_t>(p) * sc.modes + n] =
          std::sin((n + 1.0) * y);
    }
  }
  const double w = spec.params.weight_exponent();

  std::ofstream csv(art.csv_path, std::ios::binary);
  if (!csv) throw config_error("cannot write '" + art.csv_path + "'");
  csv << "# hilfer version=" << kHilferVersion
      << " config_hash=" << art.config_hash << "\n";
  csv << "t,weighted_norm";
  for (int p = 1; p <= points; ++p) csv << ",z@y_" << p;
  csv << "\n";
  for (int j = 0; j <= sc.nodes; ++j) {
    const double t = spec.grid.nodes[j];
    const double wnorm = j == 0 ? traj.states[0].l2_norm()
                                : std::pow(t, w) * traj.states[j].l2_norm();
    csv << fmt_num(t) << "," << fmt_num(wnorm);
    for (int p = 0; p < points; ++p) {
      double z = 0.0;
      const double* row = synth_table.data() + static_cast<std::size_t>(p) * sc.modes;
      for (int n = 0; n < sc.modes; ++n) {
        z += traj.states[j].coefficients[n] * row[n];
      }
      csv << "," << fmt_num(z);
    }
    csv << "\n";
  }
  csv.close();

  std::ofstream rp(art.report_path, std::ios::binary);
  if (!rp) throw config_error("cannot write '" + art.report_path + "'");
  rp << "# hilfer version=" << kHilferVersion
     << " config_hash=" << art.config_hash << "\n";
  rp << "converged=" << (report.converged ? 1 : 0) << "\n";
  rp << "iterations_used=" << report.iterations_used << "\n";
  rp << "final_update_norm=" << fmt_num(report.final_update_norm) << "\n";
  rp << "volterra_residual_weighted="
     << fmt_num(report.volterra_residual_weighted) << "\n";
  rp << "mild_self_consistency=" << fmt_num(report.mild_self_consistency) << "\n";
  rp << "h2_pass=" << (report.hypothesis_checks.h2_pass ? 1 : 0) << "\n";
  rp << "h2_slack=" << fmt_num(report.hypothesis_checks.h2_slack) << "\n";
  rp << "h3_pass=" << (report.hypothesis_checks.h3_pass ? 1 : 0) << "\n";
  rp << "h3_slack=" << fmt_num(report.hypothesis_checks.h3_slack) << "\n";
  rp << "h4_pass=" << (report.hypothesis_checks.h4_pass ? 1 : 0) << "\n";
  rp << "h4_required_radius="
     << fmt_num(report.hypothesis_checks.h4_required_radius) << "\n";
  rp << "omega_r_maintained=" << (report.omega_r_maintained ? 1 : 0) << "\n";
  rp << "modal_tail=" << fmt_num(report.modal_tail) << "\n";
  rp << "snap_error=" << fmt_num(report.snap_error) << "\n";
  rp << "under_resolved=" << (art.under_resolved ? 1 : 0) << "\n";
  return art;
}

namespace {

CheckResult check(const std::string& name, double defect, double tol) {
  return {name, defect <= tol, tol - defect};
}

void specfun_checks(std::vector<CheckResult>& out) {
  out.push_back(check("specfun.gamma_half",
                      std::abs(gamma(0.5) - std::sqrt(kPi)), 1e-14));
  for (double a : {0.25, 0.5, 0.75}) {
    for (double sig : {0.0, 1.0, 2.0, 3.5}) {
      const double expected =
          std::tgamma(1.0 + sig) / std::tgamma(1.0 + a * sig);
      const double got = wright_m_moment(a, sig);
      std::ostringstream name;
      name << "specfun.moment_a" << static_cast<int>(a * 100) << "_s" << sig;
      out.push_back(
          check(name.str(), std::abs(got - expected) / expected, 1e-8));
    }
  }
  for (double a : {0.5, 0.75}) {
    for (double r : {1.0, 2.0}) {
      std::ostringstream name;
      name << "specfun.laplace_a" << static_cast<int>(a * 100) << "_r" << r;
      out.push_back(check(name.str(), wright_laplace_check(a, r), 1e-8));
    }
  }
  {
    const MittagLeffler e11(MLParams{1.0, 1.0});
    double worst = 0.0;
    for (double z = -5.0; z <= 2.0 + 1e-12; z += 0.25) {
      worst = std::max(worst, std::abs(e11(z) - std::exp(z)) / std::exp(z));
    }
    out.push_back(check("specfun.ml_exp", worst, 1e-10));
  }
  {
    const MittagLeffler eh(MLParams{0.5, 1.0});
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
      const double expected = std::exp(x * x) * std::erfc(x);
      worst = std::max(worst, std::abs(eh(-x) - expected) / expected);
    }
    out.push_back(check("specfun.ml_erfc", worst, 1e-9));
  }
  {
    const MittagLeffler e12(MLParams{1.0, 2.0});
    double worst = 0.0;
    for (double z : {0.1, 1.0, -1.0}) {
      const double expected = std::expm1(z) / z;
      worst = std::max(worst, std::abs(e12(z) - expected) / expected);
    }
    out.push_back(check("specfun.ml_beta2", worst, 1e-10));
  }
}

void fracops_checks(std::vector<CheckResult>& out) {
  {
    const TimeGrid grid = TimeGrid::graded(1.0, 128, 2.0);
    const SampledFn f = sample(grid, [](double t) { return t; });
    const SampledFn result = rl_integral(0.5, f);
    const double c = std::tgamma(2.0) / std::tgamma(2.5);
    double worst = 0.0;
    for (int j = 1; j <= grid.intervals; ++j) {
      const double expected = c * std::pow(grid.nodes[j], 1.5);
      worst = std::max(worst, std::abs(result.values[j] - expected) / expected);
    }
    out.push_back(check("fracops.integral_linear_exact", worst, 1e-12));
  }
  {
    const TimeGrid grid = TimeGrid::graded(1.0, 256, 2.0);
    const SampledFn f =
        sample(grid, [](double t) { return std::pow(t, 1.5); }, true, 1.5);
    const SampledFn result = rl_integral(0.75, f);
    const double c = std::tgamma(2.5) / std::tgamma(3.25);
    double worst = 0.0;
    for (int j = 1; j <= grid.intervals; ++j) {
      const double expected = c * std::pow(grid.nodes[j], 2.25);
      worst = std::max(worst, std::abs(result.values[j] - expected) / expected);
    }
    out.push_back(check("fracops.integral_power", worst, 1e-4));
  }
  {
    const TimeGrid grid = TimeGrid::graded(1.0, 64, 1.5);
    const SampledFn f =
        sample(grid, [](double t) { return std::sin(t) + t * t; });
    const SampledFn rl = rl_derivative(0.6, f);
    const SampledFn h0 = hilfer_derivative(0.6, 0.0, f);
    const SampledFn cap = caputo_derivative(0.6, f);
    const SampledFn h1 = hilfer_derivative(0.6, 1.0, f);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      worst = std::max(worst, std::abs(rl.values[j] - h0.values[j]));
      worst = std::max(worst, std::abs(cap.values[j] - h1.values[j]));
    }
    out.push_back(check("fracops.hilfer_collapse", worst, 0.0));
  }
  {
    const TimeGrid grid = TimeGrid::graded(1.0, 256, 2.0);
    const SampledFn f = sample(grid, [](double t) { return std::cos(t); });
    const SampledFn nested = rl_integral(0.3, rl_integral(0.7, f));
    const SampledFn whole = rl_integral(1.0, f);
    double worst = 0.0;
    for (int j = 1; j <= grid.intervals; ++j) {
      worst = std::max(worst, std::abs(nested.values[j] - whole.values[j]));
    }
    out.push_back(check("fracops.semigroup_compose", worst, 1e-3));
  }
}

void operators_checks(std::vector<CheckResult>& out) {
  const FracParams params{0.75, 0.5, -0.5, 1.0};
  const auto op = DiagonalSectorialOperator::dirichlet_laplacian(8);
  SpectralField x = SpectralField::zero(8);
  for (int n = 0; n < 8; ++n) x.coefficients[n] = 1.0 / (n + 1.0);
  {
    const SpectralField lhs = semigroup_apply(op, 0.3, semigroup_apply(op, 0.4, x));
    const SpectralField rhs = semigroup_apply(op, 0.7, x);
    double worst = 0.0;
    for (int n = 0; n < 8; ++n) {
      worst = std::max(worst,
                       std::abs(lhs.coefficients[n] - rhs.coefficients[n]));
    }
    out.push_back(check("operators.semigroup_law", worst, 1e-14));
  }
  {
    double worst = 0.0;
    for (double t : {0.0, 0.1, 1.0, 10.0}) {
      worst = std::max(worst, std::exp(-op.eigenvalues[0] * t) - 1.0);
    }
    out.push_back(check("operators.q_contraction", worst, 0.0));
  }
  {
    const double got = family_multiplier(params, Family::t_alpha, 0.0, 0.37);
    const double expected = 1.0 / std::tgamma(0.75);
    out.push_back(check("operators.t_alpha_at_zero",
                        std::abs(got - expected), 1e-12));
  }
  {
    double worst = 0.0;
    for (Family fam : {Family::t_alpha, Family::s_alpha}) {
      const double direct =
          family_multiplier(params, fam, 4.0, 0.5, Path::direct);
      const double sub =
          family_multiplier(params, fam, 4.0, 0.5, Path::subordination);
      worst = std::max(worst, std::abs(direct - sub) / std::abs(direct));
    }
    out.push_back(check("operators.path_agreement", worst, 1e-6));
  }
  {
    const FamilyEvaluator eval(params, Family::t_alpha, Path::direct);
    double min_gap = std::numeric_limits<double>::infinity();
    double prev = eval(1.0, 0.7);
    for (int n = 2; n <= 32; ++n) {
      const double cur = eval(static_cast<double>(n) * n, 0.7);
      min_gap = std::min(min_gap, prev - cur);
      prev = cur;
    }
    out.push_back({"operators.multiplier_monotone", min_gap > 0.0, min_gap});
  }
  {
    const TimeGrid grid = TimeGrid::graded(1.0, 400, 3.0);
    const SampledFn quad = s_alpha_gamma_multiplier_quadrature(params, 1.0, grid);
    const FamilyEvaluator direct(params, Family::s_alpha_gamma, Path::direct);
    double worst = 0.0;
    for (int j = 1; j <= grid.intervals; ++j) {
      const double ref = direct(1.0, grid.nodes[j]);
      worst = std::max(worst, std::abs(quad.values[j] - ref) / std::abs(ref));
    }
    out.push_back(check("operators.s_alpha_gamma_cross_path", worst, 1e-4));
  }
}

void solver_checks(std::vector<CheckResult>& out) {
  const FracParams params{0.75, 0.5, -0.5, 1.0};
  {
    const ContractionSequence seq =
        mnc_contraction_sequence(params, 0.25, 1.0, 200);
    out.push_back({"solver.mnc_n0_exists", seq.n0.has_value(),
                   seq.n0 ? static_cast<double>(*seq.n0) : -1.0});
    double min_gap = std::numeric_limits<double>::infinity();
    if (seq.n0) {
      for (int n = *seq.n0; n < 200; ++n) {
        min_gap = std::min(min_gap,
                           seq.log_values[n - 1] - seq.log_values[n]);
      }
    }
    out.push_back({"solver.mnc_decreasing", min_gap > 0.0, min_gap});
    out.push_back(check("solver.mnc_vanishes",
                        seq.log_values.back() - (-70.0), 0.0));
  }
  {
    ProblemSpec spec;
    spec.params = params;
    spec.op = DiagonalSectorialOperator::dirichlet_laplacian(4);
    spec.grid = TimeGrid::graded(1.0, 128, 1.0);
    spec.u0 = SpectralField::zero(4);
    spec.u0.coefficients[0] = 1.0;
    spec.f = [](double, double, double u) { return u; };
    spec.kernel_k = [](double t, double s) { return std::exp(-(t - s)); };
    Trajectory u;
    u.grid = spec.grid;
    u.weight_exponent = params.weight_exponent();
    u.states.assign(spec.grid.intervals + 1, spec.u0);
    u.states[0] = SpectralField::zero(4);
    const SpectralField b = b_term(spec, u, spec.grid.intervals);
    const double expected = 1.0 - std::exp(-1.0);
    out.push_back(check("solver.b_term_exponential",
                        std::abs(b.coefficients[0] - expected), 1e-4));
  }
  {
    ProblemSpec spec;
    spec.params = params;
    spec.op = DiagonalSectorialOperator::dirichlet_laplacian(2);
    spec.grid = TimeGrid::graded(1.0, 10, 1.0);
    spec.u0 = SpectralField::zero(2);
    spec.nonlocal_times = {0.3, 0.6};
    spec.nonlocal_weights = {0.5, 0.5};
    Trajectory u;
    u.grid = spec.grid;
    u.weight_exponent = params.weight_exponent();
    u.states.assign(11, SpectralField::zero(2));
    for (int j = 0; j <= 10; ++j) {
      u.states[j].coefficients[0] = spec.grid.nodes[j];
    }
    const SpectralField h = nonlocal_h(spec, u);
    out.push_back(check("solver.nonlocal_average",
                        std::abs(h.coefficients[0] - 0.45), 1e-12));
  }
  {
    ProblemSpec spec;
    spec.params = params;
    spec.op = DiagonalSectorialOperator::dirichlet_laplacian(4);
    spec.grid = TimeGrid::graded(1.0, 100, 2.0);
    spec.u0 = SpectralField::zero(4);
    spec.u0.coefficients[0] = 1.0;
    spec.u0.coefficients[2] = 0.25;
    SolverConfig cfg;
    auto [traj, report] = solve(spec, cfg);
    double worst = 0.0;
    for (int j = 1; j <= spec.grid.intervals; ++j) {
      const SpectralField oracle =
          s_alpha_gamma_apply(spec.params, spec.op, spec.grid.nodes[j], spec.u0);
      double sum = 0.0;
      for (int n = 0; n < 4; ++n) {
        const double d = traj.states[j].coefficients[n] - oracle.coefficients[n];
        sum += d * d;
      }
      worst = std::max(worst,
                       std::pow(spec.grid.nodes[j], traj.weight_exponent) *
                           std::sqrt(0.5 * kPi * sum));
    }
    out.push_back(check("solver.linear_exactness", worst, 1e-10));
    out.push_back({"solver.linear_one_iteration", report.iterations_used == 1,
                   static_cast<double>(report.iterations_used)});
  }
  {
    ProblemSpec spec;
    spec.params = params;
    spec.op = DiagonalSectorialOperator::dirichlet_laplacian(4);
    spec.grid = TimeGrid::graded(1.0, 160, 3.0);
    spec.u0 = SpectralField::zero(4);
    spec.g = [](double, double y, double, double) { return std::sin(y); };
    Trajectory zero;
    zero.grid = spec.grid;
    zero.weight_exponent = params.weight_exponent();
    zero.states.assign(spec.grid.intervals + 1, SpectralField::zero(4));
    const Trajectory pu = picard_map(spec, zero);
    const double expected =
        mittag_leffler(MLParams{0.75, 1.75}, -1.0);
    const double got = pu.states[spec.grid.intervals].coefficients[0];
    out.push_back(check("solver.picard_forced_mode",
                        std::abs(got - expected), 1e-4));
  }
}

void harness_checks(std::vector<CheckResult>& out) {
  const Scenario s = builtin_sec5();
  const std::string first = serialize_scenario(s);
  const Scenario reparsed = parse_scenario_text(first);
  const std::string second = serialize_scenario(reparsed);
  out.push_back({"harness.round_trip", first == second,
                 first == second ? 0.0 : 1.0});
  out.push_back({"harness.hash_stable",
                 scenario_hash(s) == scenario_hash(reparsed), 0.0});
}

}  // namespace

std::string VerifyReport::text() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    char slack[32];
    std::snprintf(slack, sizeof(slack), "%.3g", c.slack);
    out << (c.pass ? "ok   " : "FAIL ") << c.name << " slack=" << slack << "\n";
  }
  out << checks.size() << " checks, " << failures << " failures\n";
  return out.str();
}

VerifyReport verify_suite(const std::string& suite) {
  VerifyReport report;
  const bool all = suite == "all";
  if (!all && suite != "specfun" && suite != "fracops" && suite != "operators" &&
      suite != "solver") {
    throw config_error(
        "unknown suite '" + suite +
        "' (expected specfun | fracops | operators | solver | all)");
  }
  if (all || suite == "specfun") specfun_checks(report.checks);
  if (all || suite == "fracops") fracops_checks(report.checks);
  if (all || suite == "operators") operators_checks(report.checks);
  if (all || suite == "solver") solver_checks(report.checks);
  if (all) harness_checks(report.checks);
  for (const CheckResult& c : report.checks) {
    if (!c.pass) ++report.failures;
  }
  return report;
}

std::string ConvergeTable::text() const {
  std::ostringstream out;
  const char* label = linear ? "error" : "residual";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << "M=" << rows[i].nodes << " " << label << "=" << fmt_num(rows[i].value);
    if (i > 0) {
      char order[32];
      std::snprintf(order, sizeof(order), "%.3f", orders[i - 1]);
      out << " order=" << order;
    }
    out << "\n";
  }
  return out.str();
}

ConvergeTable converge_study(const Scenario& scenario, int levels) {
  if (levels < 2) throw config_error("converge: levels must be >= 2");
  ConvergeTable table;
  table.linear = scenario.kind == "linear";
  for (int level = 0; level < levels; ++level) {
    Scenario s = scenario;
    s.nodes = scenario.nodes << level;
    const ProblemSpec spec = make_problem(s);
    SolverConfig cfg = make_solver_config(s);
    if (table.linear) cfg.linear_term_path = LinearTermPath::quadrature;
    auto [traj, report] = solve(spec, cfg);
    double value;
    if (table.linear) {
      const FamilyEvaluator oracle(spec.params, Family::s_alpha_gamma,
                                   Path::direct);
      double worst = 0.0;
      for (int j = 1; j <= spec.grid.intervals; ++j) {
        const double t = spec.grid.nodes[j];
        double sum = 0.0;
        for (int n = 0; n < spec.op.mode_count; ++n) {
          const double d = traj.states[j].coefficients[n] -
                           oracle(spec.op.eigenvalues[n], t) *
                               spec.u0.coefficients[n];
          sum += d * d;
        }
        worst = std::max(
            worst, std::pow(t, traj.weight_exponent) * std::sqrt(0.5 * kPi * sum));
      }
      value = worst;
    } else {
      value = report.volterra_residual_weighted;
    }
    table.rows.push_back({s.nodes, value});
    if (table.rows.size() > 1) {
      const double prev = table.rows[table.rows.size() - 2].value;
      table.orders.push_back(std::log2(prev / value));
    }
  }
  return table;
}

}  // namespace hilfer
