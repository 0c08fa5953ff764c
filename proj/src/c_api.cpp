#include "subharmonic/subharmonic.h"

#include <new>
#include <string>

#include "subharmonic/averaging.hpp"
#include "subharmonic/bounds.hpp"
#include "subharmonic/commands.hpp"
#include "subharmonic/config.hpp"
#include "subharmonic/errors.hpp"

struct sh_config {
  subharmonic::ConfigNode node;
};

struct sh_report {
  subharmonic::RunReport report;
};

namespace {

thread_local std::string g_last_error;

template <class F>
sh_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const subharmonic::Error& e) {
    g_last_error = e.what();
    return static_cast<sh_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SH_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SH_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SH_INTERNAL;
  }
}

sh_status null_argument(const char* name) {
  g_last_error = std::string(name) + " must not be NULL";
  return SH_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* sh_version(void) { return "1.0.0"; }

const char* sh_status_name(sh_status status) {
  if (status == SH_OK) return "Ok";
  return subharmonic::to_string(static_cast<subharmonic::ErrorCode>(status));
}

const char* sh_last_error(void) { return g_last_error.c_str(); }

sh_status sh_config_load(const char* path, sh_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new sh_config{subharmonic::load_config(path)};
    return SH_OK;
  });
}

sh_status sh_config_parse(const char* json_text, sh_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new sh_config{subharmonic::parse_config(json_text)};
    return SH_OK;
  });
}

void sh_config_free(sh_config* config) { delete config; }

size_t sh_command_count(void) { return subharmonic::command_names().size(); }

const char* sh_command_name(size_t index) {
  const auto& names = subharmonic::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sh_status sh_run_command(const char* command, const sh_config* config, const sh_run_options* options,
                         sh_report** report) {
  if (!command) return null_argument("command");
  if (!config) return null_argument("config");
  if (!report) return null_argument("report");
  *report = nullptr;
  return guarded([&] {
    subharmonic::RunOptions opt;
    if (options) {
      if (options->out_dir) opt.out_dir = options->out_dir;
      opt.workers = options->workers;
      opt.resume = options->resume != 0;
    }
    auto* r = new sh_report{subharmonic::run_command(command, config->node, opt)};
    *report = r;
    if (r->report.failed > 0) {
      g_last_error = std::to_string(r->report.failed) + " of " + std::to_string(r->report.points) + " points failed";
      return SH_PARTIAL_FAILURE;
    }
    return SH_OK;
  });
}

int sh_report_points(const sh_report* report) { return report ? report->report.points : 0; }
int sh_report_failed(const sh_report* report) { return report ? report->report.failed : 0; }
int sh_report_resumed(const sh_report* report) { return report ? report->report.resumed : 0; }
size_t sh_report_file_count(const sh_report* report) { return report ? report->report.files.size() : 0; }

const char* sh_report_file(const sh_report* report, size_t index) {
  if (!report || index >= report->report.files.size()) return nullptr;
  return report->report.files[index].c_str();
}

void sh_report_free(sh_report* report) { delete report; }

sh_status sh_ac_stark(double xi_d, double beta_tilde, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = subharmonic::ac_stark(xi_d, beta_tilde);
    return SH_OK;
  });
}

sh_status sh_resonant_drive_frequency(int n, int m, double beta, double xi_d, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = subharmonic::resonant_drive_frequency(subharmonic::make_resonance(n, m), beta, xi_d);
    return SH_OK;
  });
}

sh_status sh_optimal_delta_bar(int n, double nu_d_tilde, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = subharmonic::optimal_delta_bar(n, nu_d_tilde);
    return SH_OK;
  });
}

sh_status sh_contraction_bound(double q_tilde, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = subharmonic::contraction_bound(q_tilde);
    return SH_OK;
  });
}

}  // extern "C"
