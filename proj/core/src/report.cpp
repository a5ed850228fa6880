#include "pclab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pclab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    case Verdict::REPORT_ONLY: return "REPORT_ONLY";
    case Verdict::PRECONDITION_REJECTED: return "PRECONDITION_REJECTED";
  }
  return "UNKNOWN";
}

CheckLine check_le(const std::string& name, double value, double threshold, std::string note) {
  CheckLine c;
  c.name = name;
  c.value = value;
  c.op = "<=";
  c.threshold = threshold;
  c.asserted = true;
  c.ok = value <= threshold;
  c.note = std::move(note);
  return c;
}

CheckLine check_ge(const std::string& name, double value, double threshold, std::string note) {
  CheckLine c = check_le(name, value, threshold, std::move(note));
  c.op = ">=";
  c.ok = value >= threshold;
  return c;
}

CheckLine check_info(const std::string& name, double value, std::string note) {
  CheckLine c;
  c.name = name;
  c.value = value;
  c.note = std::move(note);
  return c;
}

bool ClaimReport::asserted_ok() const {
  for (const auto& c : checks)
    if (c.asserted && !c.ok) return false;
  return true;
}

void ClaimReport::add(CheckLine line) { checks.push_back(std::move(line)); }

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Csv::render() const {
  std::ostringstream out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::logic_error("Csv: row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv_atomic(const std::filesystem::path& path, const Csv& csv) {
  write_file_atomic(path, csv.render());
}

std::string render_report(const ClaimReport& report) {
  std::ostringstream out;
  out << "pclab report\n";
  out << "kind: " << report.kind << '\n';
  out << "digest: " << report.digest << '\n';
  out << "verdict: " << verdict_name(report.verdict) << '\n';
  if (!report.rejections.empty()) {
    out << "rejections:\n";
    for (const auto& r : report.rejections) out << "  " << r << '\n';
  }
  if (!report.checks.empty()) {
    out << "checks:\n";
    for (const auto& c : report.checks) {
      const char* tag = !c.asserted ? "info" : (c.ok ? "ok  " : "FAIL");
      out << "  [" << tag << "] " << c.name << " = " << format_g17(c.value);
      if (c.asserted) out << ' ' << c.op << ' ' << format_g17(c.threshold);
      if (!c.note.empty()) out << "  (" << c.note << ')';
      out << '\n';
    }
  }
  if (!report.metrics.empty()) {
    out << "metrics:\n";
    for (const auto& [k, v] : report.metrics) out << "  " << k << " = " << format_g17(v) << '\n';
  }
  out << "wall_seconds: " << format_g17(report.wall_seconds) << '\n';
  return out.str();
}

}  // namespace pclab
