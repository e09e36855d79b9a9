#include "hilfer.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "hilfer/harness.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_text(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hil_status fail(hil_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

}  // namespace

struct hil_scenario {
  hilfer::Scenario scenario;
};

extern "C" {

const char* hil_version(void) { return hilfer::kHilferVersion; }

const char* hil_last_error(void) { return g_last_error.c_str(); }

void hil_text_free(char* text) { std::free(text); }

hil_status hil_scenario_open(const char* path_or_builtin, hil_scenario** out) {
  if (!path_or_builtin || !out) {
    return fail(HIL_ERR_CONFIG, "hil_scenario_open: null argument");
  }
  *out = nullptr;
  try {
    *out = new hil_scenario{hilfer::load_scenario(path_or_builtin)};
    return HIL_OK;
  } catch (const hilfer::config_error& e) {
    return fail(HIL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HIL_ERR_RUNTIME, e.what());
  }
}

void hil_scenario_close(hil_scenario* scenario) { delete scenario; }

hil_status hil_run(const hil_scenario* scenario, const char* out_dir,
                   char** csv_path_out) {
  if (!scenario) return fail(HIL_ERR_CONFIG, "hil_run: null scenario");
  if (csv_path_out) *csv_path_out = nullptr;
  try {
    const hilfer::RunArtifact art =
        hilfer::run_scenario(scenario->scenario, out_dir ? out_dir : "");
    if (csv_path_out) *csv_path_out = dup_text(art.csv_path);
    if (!art.report.converged) {
      return fail(HIL_ERR_NONCONVERGENCE,
                  "picard iteration stopped at max_iter with update norm " +
                      std::to_string(art.report.final_update_norm) +
                      "; best iterate written to " + art.csv_path);
    }
    return HIL_OK;
  } catch (const hilfer::config_error& e) {
    return fail(HIL_ERR_CONFIG, e.what());
  } catch (const hilfer::divergence_error& e) {
    return fail(HIL_ERR_NONCONVERGENCE, e.what());
  } catch (const std::exception& e) {
    return fail(HIL_ERR_RUNTIME, e.what());
  }
}

hil_status hil_verify(const char* suite, char** summary_out) {
  if (summary_out) *summary_out = nullptr;
  try {
    const hilfer::VerifyReport report =
        hilfer::verify_suite(suite ? suite : "all");
    if (summary_out) *summary_out = dup_text(report.text());
    if (report.failures > 0) {
      return fail(HIL_ERR_VERIFY,
                  std::to_string(report.failures) + " verification checks failed");
    }
    return HIL_OK;
  } catch (const hilfer::config_error& e) {
    return fail(HIL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HIL_ERR_RUNTIME, e.what());
  }
}

hil_status hil_converge(const hil_scenario* scenario, int levels,
                        char** table_out) {
  if (!scenario) return fail(HIL_ERR_CONFIG, "hil_converge: null scenario");
  if (table_out) *table_out = nullptr;
  try {
    const hilfer::ConvergeTable table =
        hilfer::converge_study(scenario->scenario, levels);
    if (table_out) *table_out = dup_text(table.text());
    return HIL_OK;
  } catch (const hilfer::config_error& e) {
    return fail(HIL_ERR_CONFIG, e.what());
  } catch (const hilfer::divergence_error& e) {
    return fail(HIL_ERR_NONCONVERGENCE, e.what());
  } catch (const std::exception& e) {
    return fail(HIL_ERR_RUNTIME, e.what());
  }
}

}  // extern "C"
