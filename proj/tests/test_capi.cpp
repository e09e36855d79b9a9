#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hilfer.h"

namespace {

std::string tiny_scenario_file() {
  const auto dir = std::filesystem::temp_directory_path() / "hilfer_capi_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "tiny.toml";
  std::ofstream out(path);
  out << "[fracparams]\n"
         "alpha = 0.75\ngamma = 0.5\nbeta = -0.5\nT = 1.0\n"
         "[operator]\nmodes = 4\nshift = 0\n"
         "[mesh]\nnodes = 24\ngrading = 3\n"
         "[picard]\nmax_iter = 50\ntol = 1e-8\nrelaxation = 0.8\n"
         "radius_r = 6\nquadrature_order = 6\npath = direct\n"
         "[problem]\nkind = sec5\n"
         "[initial]\ncoeffs = 1\n"
         "[nonlocal]\ntimes = 0.3, 0.6\nweights = 0.05, 0.05\n"
         "[bounds]\nk1 = 5\nk2 = 0\ndelta_decay = 1\nk_bound_h3 = 0.2\n"
         "[output]\npoints = 8\ncsv = tiny.csv\n";
  return path.string();
}

}  // namespace

TEST_CASE("version string is stable") {
  CHECK(std::strcmp(hil_version(), "1.0.0") == 0);
}

TEST_CASE("builtin scenarios open and close") {
  hil_scenario* sc = nullptr;
  CHECK(hil_scenario_open("example-sec5", &sc) == HIL_OK);
  REQUIRE(sc != nullptr);
  hil_scenario_close(sc);
  sc = nullptr;
  CHECK(hil_scenario_open("linear", &sc) == HIL_OK);
  hil_scenario_close(sc);
}

TEST_CASE("open failures set the error message") {
  hil_scenario* sc = nullptr;
  CHECK(hil_scenario_open("/no/such/file.toml", &sc) == HIL_ERR_CONFIG);
  CHECK(sc == nullptr);
  CHECK(std::strlen(hil_last_error()) > 0);
  CHECK(hil_scenario_open(nullptr, &sc) == HIL_ERR_CONFIG);
  CHECK(hil_scenario_open("linear", nullptr) == HIL_ERR_CONFIG);
}

TEST_CASE("verify runs a suite and formats a summary") {
  char* summary = nullptr;
  CHECK(hil_verify("fracops", &summary) == HIL_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::strstr(summary, "ok") != nullptr);
  CHECK(std::strstr(summary, "0 failures") != nullptr);
  hil_text_free(summary);
  CHECK(hil_verify("nope", &summary) == HIL_ERR_CONFIG);
  CHECK(summary == nullptr);
}

TEST_CASE("run writes the csv for a file-based scenario") {
  const std::string path = tiny_scenario_file();
  hil_scenario* sc = nullptr;
  REQUIRE(hil_scenario_open(path.c_str(), &sc) == HIL_OK);
  const auto out_dir =
      std::filesystem::temp_directory_path() / "hilfer_capi_out";
  std::filesystem::remove_all(out_dir);
  char* csv_path = nullptr;
  CHECK(hil_run(sc, out_dir.string().c_str(), &csv_path) == HIL_OK);
  REQUIRE(csv_path != nullptr);
  CHECK(std::filesystem::exists(csv_path));
  hil_text_free(csv_path);
  hil_scenario_close(sc);
  std::filesystem::remove_all(out_dir);
  std::filesystem::remove_all(std::filesystem::path(path).parent_path());
}

TEST_CASE("run rejects a null scenario") {
  char* csv_path = nullptr;
  CHECK(hil_run(nullptr, nullptr, &csv_path) == HIL_ERR_CONFIG);
  CHECK(csv_path == nullptr);
}

TEST_CASE("converge validates its level count") {
  hil_scenario* sc = nullptr;
  REQUIRE(hil_scenario_open("linear", &sc) == HIL_OK);
  char* table = nullptr;
  CHECK(hil_converge(sc, 1, &table) == HIL_ERR_CONFIG);
  CHECK(table == nullptr);
  CHECK(std::strstr(hil_last_error(), "levels") != nullptr);
  CHECK(hil_converge(nullptr, 2, &table) == HIL_ERR_CONFIG);
  hil_scenario_close(sc);
}
