// Command-line front end; talks to the library only through the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "subharmonic/subharmonic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitFailure = 1;

int run(const std::string& command, const std::string& config_path, const std::string& out_dir, int workers,
        bool resume) {
  sh_config* config = nullptr;
  sh_status st = sh_config_load(config_path.c_str(), &config);
  if (st != SH_OK) {
    std::fprintf(stderr, "error: %s: %s\n", sh_status_name(st), sh_last_error());
    return st == SH_CONFIG_ERROR ? kExitConfig : kExitFailure;
  }
  const sh_run_options options{out_dir.c_str(), workers, resume ? 1 : 0};
  sh_report* report = nullptr;
  st = sh_run_command(command.c_str(), config, &options, &report);
  sh_config_free(config);
  if (report) {
    for (size_t i = 0; i < sh_report_file_count(report); ++i) std::printf("wrote %s\n", sh_report_file(report, i));
    std::printf("%d points, %d failed, %d resumed\n", sh_report_points(report), sh_report_failed(report),
                sh_report_resumed(report));
    sh_report_free(report);
  }
  switch (st) {
    case SH_OK:
      return kExitOk;
    case SH_PARTIAL_FAILURE:
      std::fprintf(stderr, "warning: %s\n", sh_last_error());
      return kExitPartial;
    case SH_CONFIG_ERROR:
      std::fprintf(stderr, "error: %s: %s\n", sh_status_name(st), sh_last_error());
      return kExitConfig;
    default:
      std::fprintf(stderr, "error: %s: %s\n", sh_status_name(st), sh_last_error());
      return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet, averaging and regularity-bound computations for driven Josephson circuits"};
  app.set_version_flag("--version", std::string(sh_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int workers = 1;
  bool resume = false;
  std::string chosen;
  for (size_t i = 0; i < sh_command_count(); ++i) {
    const std::string name = sh_command_name(i);
    CLI::App* sub = app.add_subcommand(name, "run " + name);
    sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--resume", resume, "keep finished rows of an earlier scan");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return run(chosen, config_path, out_dir, workers, resume);
}
