#pragma once

// Deterministic run artifacts: verdict taxonomy, check lines, CSV rendering
// with fixed 17-significant-digit formatting, atomic file writes, and the
// config digest. Wall time appears only in report.txt so CSV outputs are
// byte-identical across reruns.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pclab {

enum class Verdict { PASS, FAIL, REPORT_ONLY, PRECONDITION_REJECTED };

const char* verdict_name(Verdict v);

struct CheckLine {
  std::string name;
  double value = 0.0;
  std::string op;          // "<=" or ">=" against threshold; empty for info lines
  double threshold = 0.0;
  bool asserted = false;   // informational when false
  bool ok = true;
  std::string note;
};

CheckLine check_le(const std::string& name, double value, double threshold, std::string note = "");
CheckLine check_ge(const std::string& name, double value, double threshold, std::string note = "");
CheckLine check_info(const std::string& name, double value, std::string note = "");

struct ClaimReport {
  std::string kind;
  std::string digest;
  Verdict verdict = Verdict::PASS;
  std::vector<CheckLine> checks;
  std::map<std::string, double> metrics;   // sorted keys fix CSV column order
  std::vector<std::string> rejections;     // violated preconditions, when any
  double wall_seconds = 0.0;

  bool asserted_ok() const;
  void add(CheckLine line);
};

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells pre-rendered

  std::string render() const;
};

// 17 significant digits, shortest-round-trip style via %.17g.
std::string format_g17(double x);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_csv_atomic(const std::filesystem::path& path, const Csv& csv);

std::string render_report(const ClaimReport& report);

}  // namespace pclab
