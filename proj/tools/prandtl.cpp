#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "prandtl/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady Prandtl system in Von Mises variables: solve, march, "
               "fit decay rates, certify barriers"};

  std::string config_path, out_dir, resolution, command;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--resolution", resolution, "low|default|high")
      ->check(CLI::IsMember({"low", "default", "high"}));
  app.add_option("--command", command,
                 "blasius|march|verify|fit|barrier|all (overrides config)")
      ->check(CLI::IsMember(
          {"blasius", "march", "verify", "fit", "barrier", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    prandtl::RunConfig cfg;
    if (!config_path.empty()) cfg = prandtl::parse_config_file(config_path);
    if (!resolution.empty()) prandtl::apply_resolution(cfg, resolution);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!command.empty()) cfg.command = command;

    const prandtl::PipelineResult result = prandtl::run_pipeline(cfg);
    std::printf("%s (summary: %s)\n",
                result.exit_code == 0 ? "ok" : "audit failures",
                result.summary_path.c_str());
    return result.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
