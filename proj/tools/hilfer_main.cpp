#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "hilfer.h"

namespace {

int report_failure(hil_status status) {
  std::fprintf(stderr, "error: %s\n", hil_last_error());
  return static_cast<int>(status);
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  hil_scenario* scenario = nullptr;
  hil_status status = hil_scenario_open(config.c_str(), &scenario);
  if (status != HIL_OK) return report_failure(status);
  char* csv_path = nullptr;
  status = hil_run(scenario, out_dir.c_str(), &csv_path);
  if (csv_path) {
    std::printf("wrote %s\n", csv_path);
    hil_text_free(csv_path);
  }
  hil_scenario_close(scenario);
  return status == HIL_OK ? 0 : report_failure(status);
}

int cmd_verify(const std::string& suite) {
  char* summary = nullptr;
  const hil_status status = hil_verify(suite.c_str(), &summary);
  if (summary) {
    std::fputs(summary, stdout);
    hil_text_free(summary);
  }
  return status == HIL_OK ? 0 : report_failure(status);
}

int cmd_converge(const std::string& config, int levels) {
  hil_scenario* scenario = nullptr;
  hil_status status = hil_scenario_open(config.c_str(), &scenario);
  if (status != HIL_OK) return report_failure(status);
  char* table = nullptr;
  status = hil_converge(scenario, levels, &table);
  hil_scenario_close(scenario);
  if (table) {
    std::fputs(table, stdout);
    hil_text_free(table);
  }
  return status == HIL_OK ? 0 : report_failure(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal fractional evolution solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hil_version()));

  std::string config;
  std::string out_dir;
  std::string suite;
  int levels = 0;

  CLI::App* run =
      app.add_subcommand("run", "solve a scenario and write trajectory artifacts");
  run->add_option("--config", config, "scenario file or builtin name")->required();
  run->add_option("--out", out_dir, "output directory (default: current)");

  CLI::App* verify = app.add_subcommand("verify", "run a named check suite");
  verify->add_option("--suite", suite,
                     "specfun | fracops | operators | solver | all")
      ->required();

  CLI::App* converge =
      app.add_subcommand("converge", "mesh refinement study for a scenario");
  converge->add_option("--config", config, "scenario file or builtin name")
      ->required();
  converge->add_option("--levels", levels, "refinement levels (>= 2)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(HIL_ERR_CONFIG);
  }

  if (run->parsed()) return cmd_run(config, out_dir);
  if (verify->parsed()) return cmd_verify(suite);
  return cmd_converge(config, levels);
}
