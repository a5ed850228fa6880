#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pclab/experiments.hpp"
#include "pclab/report.hpp"

using namespace pclab;
using nlohmann::json;

TEST_CASE("g17 formatting round-trips doubles exactly") {
  const double samples[] = {0.1,     1.0 / 3.0,          6.9788641996388785,
                            -2.5e-9, 0.8048408925406094, 1e300};
  for (double x : samples) {
    const std::string s = format_g17(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_g17(1.0) == "1");
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("csv rendering rejects ragged rows") {
  Csv t;
  t.columns = {"a", "b"};
  t.rows.push_back({"1", "2"});
  CHECK(t.render() == "a,b\n1,2\n");
  t.rows.push_back({"3"});
  CHECK_THROWS_AS(t.render(), std::logic_error);
}

TEST_CASE("atomic writes create parent directories") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pclab_report_test";
  fs::remove_all(dir);
  const fs::path target = dir / "deep" / "nested" / "out.txt";
  write_file_atomic(target, "payload\n");
  std::ifstream in(target);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "payload\n");
  fs::remove_all(dir);
}

TEST_CASE("check lines carry the assertion verdict") {
  ClaimReport rep;
  rep.add(check_le("small", 1e-9, 1e-6));
  rep.add(check_ge("big", 2.0, 1.0));
  rep.add(check_info("note", 42.0));
  CHECK(rep.asserted_ok());
  rep.add(check_le("broken", 2e-6, 1e-6));
  CHECK(!rep.asserted_ok());
  const std::string text = render_report(rep);
  CHECK(text.find("broken") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}

TEST_CASE("normalization is a fixpoint and the digest ignores output_dir") {
  json raw = {{"experiment", {{"kind", "heat"}}},
              {"domain", {{"dims", 1}}},
              {"time", {{"horizon", 0.5}, {"steps", 32}}}};
  const Config a = normalize_config(raw);
  const Config b = normalize_config(a.doc);
  CHECK(a.doc == b.doc);
  CHECK(a.digest == b.digest);

  json moved = raw;
  moved["output_dir"] = "/tmp/somewhere_else";
  const Config c = normalize_config(moved);
  CHECK(c.digest == a.digest);
  CHECK(c.output_dir() == "/tmp/somewhere_else");
}

TEST_CASE("every violation is reported, not just the first") {
  json raw = {{"experiment", {{"kind", "decomposition"}}},
              {"domain", {{"dims", 1}, {"grid_points", {2}}}},
              {"time", {{"horizon", -1.0}}},
              {"source",
               {{"kind", "constant"},
                {"value", 1.0},
                {"bounds", {{"c", 0.0}, {"M", 2.0}}}}}};
  try {
    normalize_config(raw);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations.size() >= 3);
    auto has = [&](const char* needle) {
      return std::any_of(e.violations.begin(), e.violations.end(), [&](const std::string& v) {
        return v.find(needle) != std::string::npos;
      });
    };
    CHECK(has("source.bounds.c must be > 0"));
    CHECK(has("time.horizon"));
    CHECK(has("grid_points"));
  }
}

TEST_CASE("unknown experiment kinds list the catalogue") {
  json raw = {{"experiment", {{"kind", "warp_drive"}}}};
  try {
    normalize_config(raw);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(!e.violations.empty());
    CHECK(e.violations.front().find("warp_drive") != std::string::npos);
    CHECK(e.violations.front().find("heat") != std::string::npos);
  }
  CHECK(experiment_names().size() == 11);
}

TEST_CASE("unknown keys anywhere are rejected") {
  json raw = {{"experiment", {{"kind", "heat"}, {"frobnicate", 1}}},
              {"domain", {{"dims", 1}, {"typo_key", true}}}};
  try {
    normalize_config(raw);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    auto has = [&](const char* needle) {
      return std::any_of(e.violations.begin(), e.violations.end(), [&](const std::string& v) {
        return v.find(needle) != std::string::npos;
      });
    };
    CHECK(has("frobnicate"));
    CHECK(has("typo_key"));
  }
}

TEST_CASE("exit codes follow the verdict") {
  RunArtifacts art;
  art.report.verdict = Verdict::PASS;
  CHECK(art.exit_code() == 0);
  art.report.verdict = Verdict::REPORT_ONLY;
  CHECK(art.exit_code() == 0);
  art.report.verdict = Verdict::FAIL;
  CHECK(art.exit_code() == 1);
  art.report.verdict = Verdict::PRECONDITION_REJECTED;
  CHECK(art.exit_code() == 3);
  art.report.verdict = Verdict::FAIL;
  art.diverged = true;
  CHECK(art.exit_code() == 4);
}

TEST_CASE("a fast run produces byte-stable artifacts") {
  json raw = {{"experiment", {{"kind", "heat"}}},
              {"domain", {{"dims", 1}, {"grid_points", {64}}, {"mode_cap", {16}}}},
              {"time", {{"horizon", 0.25}, {"steps", 16}}}};
  const Config cfg = normalize_config(raw);
  const RunArtifacts first = run_experiment(cfg);
  const RunArtifacts second = run_experiment(cfg);
  CHECK(first.report.verdict == Verdict::PASS);
  REQUIRE(first.csvs.size() == second.csvs.size());
  for (size_t i = 0; i < first.csvs.size(); ++i) {
    CHECK(first.csvs[i].first == second.csvs[i].first);
    CHECK(first.csvs[i].second.render() == second.csvs[i].second.render());
  }
}

TEST_CASE("sweep grids reject oversized products") {
  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "pclab_grid_test.json";
  json grid = {{"cap", 4},
               {"parameters",
                {{{"path", "/time/steps"}, {"values", {16, 32, 64}}},
                 {{"path", "/experiment/method"}, {"values", {"duhamel", "crank_nicolson"}}}}}};
  std::ofstream(p) << grid.dump();
  CHECK_THROWS_AS(load_sweep_grid(p), ConfigError);
  grid["cap"] = 16;
  std::ofstream(p) << grid.dump();
  const SweepGrid g = load_sweep_grid(p);
  CHECK(g.paths.size() == 2);
  CHECK(g.values[0].size() == 3);
  fs::remove(p);
}
