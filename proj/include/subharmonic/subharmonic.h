/* C interface to the subharmonic library. All functions return an sh_status;
 * details of the most recent failure on the calling thread are available
 * from sh_last_error(). */
#ifndef SUBHARMONIC_H
#define SUBHARMONIC_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SUBHARMONIC_BUILDING_DLL)
#define SH_API __declspec(dllexport)
#else
#define SH_API __declspec(dllimport)
#endif
#else
#define SH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the library's error categories. */
typedef enum sh_status {
  SH_OK = 0,
  SH_INVALID_ARGUMENT = 1,
  SH_POLE_AT_RESONANCE = 2,
  SH_NON_POSITIVE_ENERGY = 3,
  SH_OVERDAMPED_REGIME = 4,
  SH_NOT_COPRIME = 5,
  SH_STEP_SIZE_UNDERFLOW = 6,
  SH_NO_CONVERGENCE = 7,
  SH_SINGULAR_JACOBIAN = 8,
  SH_AMBIGUOUS_WINDING = 9,
  SH_ESCAPED = 10,
  SH_DIMENSION_TOO_SMALL = 11,
  SH_UNITARITY_LOSS = 12,
  SH_TRUNCATION_UNSAFE = 13,
  SH_NO_CAT_MANIFOLD = 14,
  SH_INSUFFICIENT_SAMPLING = 15,
  SH_NO_KERNEL = 16,
  SH_MARGINAL_STABILITY = 17,
  SH_NO_DISSIPATION = 18,
  SH_DELTA_BAR_OUT_OF_RANGE = 19,
  SH_NO_ROOT = 20,
  SH_CONFIG_ERROR = 21,
  SH_IO_ERROR = 22,
  SH_PARTIAL_FAILURE = 23,
  SH_INTERNAL = 99
} sh_status;

typedef struct sh_config sh_config;
typedef struct sh_report sh_report;

typedef struct sh_run_options {
  const char* out_dir; /* NULL means "." */
  int workers;         /* >= 1 */
  int resume;          /* nonzero keeps finished rows of an earlier scan */
} sh_run_options;

SH_API const char* sh_version(void);
SH_API const char* sh_status_name(sh_status status);
/* Message of the last failure on this thread; empty if none. */
SH_API const char* sh_last_error(void);

SH_API sh_status sh_config_load(const char* path, sh_config** out);
SH_API sh_status sh_config_parse(const char* json_text, sh_config** out);
SH_API void sh_config_free(sh_config* config);

/* Number of subcommands and the name at an index (NULL when out of range). */
SH_API size_t sh_command_count(void);
SH_API const char* sh_command_name(size_t index);

/* Runs a subcommand. Returns SH_OK when every point succeeded and
 * SH_PARTIAL_FAILURE when some failed; *report is set in both cases. */
SH_API sh_status sh_run_command(const char* command, const sh_config* config, const sh_run_options* options,
                                sh_report** report);
SH_API int sh_report_points(const sh_report* report);
SH_API int sh_report_failed(const sh_report* report);
SH_API int sh_report_resumed(const sh_report* report);
SH_API size_t sh_report_file_count(const sh_report* report);
SH_API const char* sh_report_file(const sh_report* report, size_t index);
SH_API void sh_report_free(sh_report* report);

/* Closed-form helpers. */
SH_API sh_status sh_ac_stark(double xi_d, double beta_tilde, double* out);
SH_API sh_status sh_resonant_drive_frequency(int n, int m, double beta, double xi_d, double* out);
SH_API sh_status sh_optimal_delta_bar(int n, double nu_d_tilde, double* out);
SH_API sh_status sh_contraction_bound(double q_tilde, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SUBHARMONIC_H */
