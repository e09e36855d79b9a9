#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "hilfer/harness.hpp"

using hilfer::Scenario;

namespace {

std::string parse_failure(const std::string& text) {
  try {
    hilfer::parse_scenario_text(text);
  } catch (const hilfer::config_error& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

int line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse errors carry the offending line") {
  CHECK(contains(parse_failure("[mesh\nnodes = 24\n"),
                 "line 1: malformed section header"));
  CHECK(contains(parse_failure("[mesh]\nnodes 24\n"),
                 "line 2: expected 'key = value'"));
  CHECK(contains(parse_failure("[mesh]\n = 24\n"), "line 2: empty key"));
  CHECK(contains(parse_failure("[ ]\n"), "line 1: empty section name"));
  CHECK(contains(parse_failure("[x\n"), "line 1: malformed section header"));
}

TEST_CASE("unknown keys and bad values are aggregated") {
  const Scenario base = hilfer::load_scenario("example-sec5");
  std::string text = hilfer::serialize_scenario(base);
  text += "\n[mesh]\nspacing = 3\n";
  const std::string msg = parse_failure(text);
  CHECK(contains(msg, "invalid scenario:"));
  CHECK(contains(msg, "unknown key"));
  CHECK(contains(msg, "spacing"));

  std::string bad = hilfer::serialize_scenario(base);
  bad += "\n[fracparams]\nalpha = 2.0\n";
  CHECK(contains(parse_failure(bad), "fracparams.alpha"));

  std::string nan_text = hilfer::serialize_scenario(base);
  nan_text += "\n[mesh]\ngrading = abc\n";
  CHECK(contains(parse_failure(nan_text), "not a number"));
}

TEST_CASE("an empty scenario reports every missing field") {
  const std::string msg = parse_failure("");
  CHECK(contains(msg, "invalid scenario:"));
  CHECK(contains(msg, ": missing"));
  CHECK(contains(msg, "fracparams.alpha"));
}

TEST_CASE("builtins expose their documented settings") {
  const Scenario sec5 = hilfer::load_scenario("example-sec5");
  CHECK(sec5.kind == "sec5");
  CHECK(sec5.alpha == 0.75);
  CHECK(sec5.gamma_type == 0.5);
  CHECK(sec5.modes == 32);
  CHECK(sec5.nodes == 200);
  CHECK(sec5.grading == 3.0);
  CHECK(sec5.nonlocal_times.size() == 2);
  CHECK(sec5.nonlocal_weights.size() == 2);
  CHECK(sec5.csv_name == "trajectory.csv");

  const Scenario lin = hilfer::load_scenario("linear");
  CHECK(lin.kind == "linear");
  CHECK(lin.modes == 16);
  CHECK(lin.nodes == 400);
  CHECK(lin.grading == 2.0);
  CHECK(lin.nonlocal_times.empty());
  CHECK(lin.csv_name == "linear.csv");

  CHECK_THROWS_AS(hilfer::load_scenario("/no/such/file.toml"),
                  hilfer::config_error);
}

TEST_CASE("serialization round-trips byte for byte") {
  const Scenario sec5 = hilfer::load_scenario("example-sec5");
  const std::string bytes = hilfer::serialize_scenario(sec5);
  const Scenario reparsed = hilfer::parse_scenario_text(bytes);
  CHECK(hilfer::serialize_scenario(reparsed) == bytes);

  const auto dir = std::filesystem::temp_directory_path() / "hilfer_harness_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "roundtrip.toml";
  hilfer::save_scenario(sec5, file.string());
  const Scenario loaded = hilfer::load_scenario(file.string());
  CHECK(hilfer::serialize_scenario(loaded) == bytes);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario hash is stable hex and tracks content") {
  const Scenario sec5 = hilfer::load_scenario("example-sec5");
  const std::string h1 = hilfer::scenario_hash(sec5);
  CHECK(h1.size() == 16);
  CHECK(h1.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(hilfer::scenario_hash(sec5) == h1);
  Scenario other = sec5;
  other.alpha = 0.5;
  CHECK(hilfer::scenario_hash(other) != h1);
}

TEST_CASE("make_problem wires the builtin nonlinearities") {
  Scenario sec5 = hilfer::load_scenario("example-sec5");
  sec5.modes = 6;
  const hilfer::ProblemSpec p1 = hilfer::make_problem(sec5);
  CHECK(p1.g != nullptr);
  CHECK(p1.f != nullptr);
  CHECK(p1.kernel_k != nullptr);
  CHECK(p1.nonlocal_times.size() == 2);
  REQUIRE(p1.u0.size() == 6);
  CHECK(p1.u0.coefficients[0] == 1.0);
  CHECK(p1.u0.coefficients[5] == 0.0);

  const Scenario lin = hilfer::load_scenario("linear");
  const hilfer::ProblemSpec p2 = hilfer::make_problem(lin);
  CHECK(p2.g == nullptr);
  CHECK(p2.f == nullptr);
  CHECK(p2.nonlocal_times.empty());

  Scenario bad_kind = sec5;
  bad_kind.kind = "cubic";
  CHECK_THROWS_AS(hilfer::make_problem(bad_kind), hilfer::config_error);
}

TEST_CASE("make_solver_config mirrors the picard block") {
  Scenario sec5 = hilfer::load_scenario("example-sec5");
  sec5.linear_path = "quadrature";
  const hilfer::SolverConfig cfg = hilfer::make_solver_config(sec5);
  CHECK(cfg.max_iterations == sec5.max_iterations);
  CHECK(cfg.tolerance == sec5.tolerance);
  CHECK(cfg.relaxation == sec5.relaxation);
  CHECK(cfg.radius_r == sec5.radius_r);
  CHECK(cfg.quadrature_order == sec5.quadrature_order);
  CHECK(cfg.threads == 0);
  CHECK(cfg.linear_term_path == hilfer::LinearTermPath::quadrature);
}

TEST_CASE("run_scenario writes the trajectory and the report") {
  Scenario tiny = hilfer::load_scenario("example-sec5");
  tiny.modes = 4;
  tiny.nodes = 24;
  tiny.output_points = 8;
  tiny.csv_name = "tiny.csv";
  const auto dir =
      std::filesystem::temp_directory_path() / "hilfer_harness_run";
  std::filesystem::remove_all(dir);
  const hilfer::RunArtifact art = hilfer::run_scenario(tiny, dir.string());
  CHECK(std::filesystem::exists(art.csv_path));
  CHECK(std::filesystem::exists(art.report_path));
  CHECK(art.config_hash.size() == 16);
  CHECK(art.report.converged);
  // header, column labels, then one row per node
  CHECK(line_count(art.csv_path) == tiny.nodes + 3);
  std::ifstream csv(art.csv_path);
  std::string first;
  std::getline(csv, first);
  CHECK(contains(first, "config_hash=" + art.config_hash));
  std::ifstream report(art.report_path);
  std::string body((std::istreambuf_iterator<char>(report)),
                   std::istreambuf_iterator<char>());
  CHECK(contains(body, "converged=1"));
  CHECK(contains(body, "volterra_residual_weighted"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify_suite rejects unknown suites") {
  CHECK_THROWS_AS(hilfer::verify_suite("nope"), hilfer::config_error);
  const hilfer::VerifyReport rep = hilfer::verify_suite("specfun");
  CHECK(rep.failures == 0);
  CHECK(rep.checks.size() > 0);
  CHECK(contains(rep.text(), "ok"));
}

TEST_CASE("converge_study needs at least two levels") {
  const Scenario lin = hilfer::load_scenario("linear");
  CHECK_THROWS_AS(hilfer::converge_study(lin, 1), hilfer::config_error);
}

TEST_CASE("converge_study reports per-level orders") {
  Scenario lin = hilfer::load_scenario("linear");
  lin.modes = 4;
  lin.nodes = 50;
  const hilfer::ConvergeTable table = hilfer::converge_study(lin, 2);
  CHECK(table.linear);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].nodes == 50);
  CHECK(table.rows[1].nodes == 100);
  CHECK(table.rows[0].value > table.rows[1].value);
  REQUIRE(table.orders.size() == 1);
  CHECK(contains(table.text(), "order="));
}
