// pclab: run, sweep, and validate experiment configs.
//
// Exit codes: 0 pass or report-only, 1 claim failure or unexpected error,
// 2 argument/JSON parse error, 3 config validation or precondition rejection,
// 4 trajectory divergence. No other codes are emitted.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pclab/experiments.hpp"
#include "pclab/ns.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pclab: deterministic spectral experiments on parabolic sign claims"};
  app.require_subcommand(1);

  std::string config_path, grid_path, output_dir;
  int workers = 0;

  CLI::App* cmd_run = app.add_subcommand("run", "Run one experiment config");
  cmd_run->add_option("config", config_path, "JSON config file")->required();
  cmd_run->add_option("--output-dir", output_dir, "Override the config's output_dir");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run every point of a parameter grid");
  cmd_sweep->add_option("config", config_path, "Base JSON config file")->required();
  cmd_sweep->add_option("--grid", grid_path, "Sweep grid JSON (paths + values)")->required();
  cmd_sweep->add_option("--output-dir", output_dir, "Directory for point_NNNN/ and sweep.csv");
  cmd_sweep->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Normalize a config and print it with its digest");
  cmd_validate->add_option("config", config_path, "JSON config file")->required();

  app.add_subcommand("list-experiments", "List the available experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help parses "successfully"
  }

  try {
    if (app.got_subcommand("list-experiments")) {
      for (const auto& name : pclab::experiment_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (app.got_subcommand("validate")) {
      const pclab::Config cfg = pclab::load_config(config_path);
      std::printf("%s\n", cfg.doc.dump(2).c_str());
      std::printf("digest: %s\n", cfg.digest.c_str());
      return 0;
    }
    if (app.got_subcommand("run")) {
      pclab::Config cfg = pclab::load_config(config_path);
      if (!output_dir.empty()) cfg.doc["output_dir"] = output_dir;
      const pclab::RunArtifacts art = pclab::run_experiment(cfg);
      pclab::write_artifacts(art, cfg.output_dir());
      std::fputs(pclab::render_report(art.report).c_str(), stdout);
      return art.exit_code();
    }
    if (app.got_subcommand("sweep")) {
      const pclab::Config base = pclab::load_config(config_path);
      const pclab::SweepGrid grid = pclab::load_sweep_grid(grid_path);
      const std::filesystem::path dir = output_dir.empty() ? base.output_dir() : output_dir;
      const int code = pclab::run_sweep(base, grid, dir, workers);
      std::printf("sweep written to %s (exit %d)\n", dir.string().c_str(), code);
      return code;
    }
  } catch (const pclab::ConfigError& e) {
    std::fprintf(stderr, "invalid config:\n");
    for (const auto& v : e.violations) std::fprintf(stderr, "  %s\n", v.c_str());
    return 3;
  } catch (const nlohmann::json::parse_error& e) {
    std::fprintf(stderr, "JSON parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
