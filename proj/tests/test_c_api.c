/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "subharmonic/subharmonic.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static int has_command(const char* name) {
  for (size_t i = 0; i < sh_command_count(); ++i)
    if (strcmp(sh_command_name(i), name) == 0) return 1;
  return 0;
}

int main(int argc, char** argv) {
  const char* out_dir = argc > 1 ? argv[1] : ".";
  double v = 0.0;

  EXPECT(strcmp(sh_version(), "1.0.0") == 0);
  EXPECT(strcmp(sh_status_name(SH_OK), "Ok") == 0);
  EXPECT(sh_command_count() == 7);
  EXPECT(has_command("chaos-bounds"));
  EXPECT(has_command("gap-scan"));
  EXPECT(sh_command_name(99) == NULL);

  EXPECT(sh_contraction_bound(1.0, &v) == SH_OK);
  EXPECT(fabs(v - sqrt(3.0) / 2.0) < 1e-12);
  EXPECT(sh_contraction_bound(0.4, &v) == SH_OVERDAMPED_REGIME);
  EXPECT(strlen(sh_last_error()) > 0);
  EXPECT(sh_optimal_delta_bar(3, 3.0, &v) == SH_OK);
  EXPECT(fabs(v - 0.0855) < 1e-4);
  EXPECT(sh_ac_stark(0.0, 0.5, &v) == SH_OK && v == 0.0);
  EXPECT(sh_resonant_drive_frequency(3, 1, 0.5, 1.7, &v) == SH_OK);
  EXPECT(fabs(v - 3.2985) < 1e-4);
  EXPECT(sh_resonant_drive_frequency(4, 2, 0.5, 1.7, &v) == SH_NOT_COPRIME);
  EXPECT(sh_ac_stark(0.0, 0.5, NULL) == SH_INVALID_ARGUMENT);

  sh_config* cfg = NULL;
  EXPECT(sh_config_parse("{\"model\": {\"beta\": 0.5", &cfg) == SH_CONFIG_ERROR);
  EXPECT(cfg == NULL);
  EXPECT(strstr(sh_last_error(), "line") != NULL);

  EXPECT(sh_config_parse("{\"model\": {\"nu_d\": 3.0}, \"bounds\": {\"n_bar\": 3}}", &cfg) == SH_OK);
  sh_report* report = NULL;
  sh_run_options options = {out_dir, 1, 0};
  EXPECT(sh_run_command("chaos-bounds", cfg, &options, &report) == SH_CONFIG_ERROR);
  EXPECT(strstr(sh_last_error(), "model.beta") != NULL);
  EXPECT(report == NULL);
  sh_config_free(cfg);

  EXPECT(sh_config_parse("{\"model\": {\"beta\": 0.5, \"nu_d\": 3.0, \"xi_d\": 1.7}, \"bounds\": {\"n_bar\": 3}}",
                         &cfg) == SH_OK);
  EXPECT(sh_run_command("no-such-command", cfg, &options, &report) != SH_OK);
  EXPECT(sh_run_command("chaos-bounds", cfg, &options, &report) == SH_OK);
  if (report) {
    EXPECT(sh_report_points(report) == 1);
    EXPECT(sh_report_failed(report) == 0);
    EXPECT(sh_report_file_count(report) == 1);
    EXPECT(strstr(sh_report_file(report, 0), "bounds.json") != NULL);
    EXPECT(sh_report_file(report, 5) == NULL);
    sh_report_free(report);
  } else {
    ++failures;
  }
  sh_config_free(cfg);
  sh_config_free(NULL);
  sh_report_free(NULL);

  if (failures == 0) printf("C API checks passed\n");
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
