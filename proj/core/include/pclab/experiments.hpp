#pragma once

// Config ingestion (validate-everything-then-report), experiment dispatch,
// and deterministic artifact writing for the CLI and the test suites.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pclab/report.hpp"

namespace pclab {

// Carries every violated constraint, not just the first.
struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v)
      : std::runtime_error(v.empty() ? "invalid config" : v.front()), violations(std::move(v)) {}
};

struct Config {
  nlohmann::json doc;   // normalized: defaults filled, canonical key set
  std::string digest;   // fnv1a64 over the canonical dump

  std::string kind() const { return doc.at("experiment").at("kind").get<std::string>(); }
  std::string output_dir() const { return doc.at("output_dir").get<std::string>(); }
};

const std::vector<std::string>& experiment_names();

// Fills defaults and validates; throws ConfigError listing every violation.
Config normalize_config(const nlohmann::json& raw);

// Parses the file (propagates nlohmann parse_error) and normalizes.
Config load_config(const std::filesystem::path& path);

struct RunArtifacts {
  ClaimReport report;
  std::vector<std::pair<std::string, Csv>> csvs;  // filename -> table
  bool diverged = false;

  // 0 PASS/REPORT_ONLY, 1 FAIL, 3 precondition rejection, 4 divergence.
  int exit_code() const;
};

RunArtifacts run_experiment(const Config& cfg);

// report.txt plus every CSV, written atomically into dir.
void write_artifacts(const RunArtifacts& art, const std::filesystem::path& dir);

struct SweepGrid {
  long cap = 1024;
  std::vector<std::string> paths;                    // JSON pointers into the config
  std::vector<std::vector<nlohmann::json>> values;   // candidate values per path
};

// Throws ConfigError on malformed grids or when the product exceeds cap.
SweepGrid load_sweep_grid(const std::filesystem::path& path);

// Runs every grid point (concurrently up to `workers`), writes per-point
// artifacts into out_dir/point_NNNN and the aggregate sweep.csv; returns the
// overall exit code (worst point, precedence 3 > 4 > 1 > 0).
int run_sweep(const Config& base, const SweepGrid& grid, const std::filesystem::path& out_dir,
              int workers);

}  // namespace pclab
