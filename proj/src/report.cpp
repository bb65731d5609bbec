#include "btq/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace btq {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool CheckRecord::compare(const std::string& name, double measured, double reference,
                          double tolerance, const std::string& provenance) {
  const bool ok = std::isfinite(measured) && std::abs(measured - reference) <= tolerance;
  comparisons.push_back({{"name", name},
                         {"measured", measured},
                         {"reference", reference},
                         {"tolerance", tolerance},
                         {"provenance", provenance},
                         {"pass", ok}});
  pass = pass && ok;
  return ok;
}

bool CheckRecord::require(const std::string& name, bool ok, double measured,
                          const std::string& provenance) {
  comparisons.push_back(
      {{"name", name}, {"measured", measured}, {"provenance", provenance}, {"pass", ok}});
  pass = pass && ok;
  return ok;
}

void CheckRecord::row(std::initializer_list<double> values) {
  csv_rows.emplace_back(values);
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (c.ran && !c.pass) return false;
  return true;
}

void Report::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  json summary;
  summary["environment"] = environment;
  summary["checks"] = json::array();
  bool all = true;
  for (const auto& c : checks) {
    json jc;
    jc["id"] = c.id;
    jc["pass"] = c.pass;
    jc["ran"] = c.ran;
    if (!c.note.empty()) jc["note"] = c.note;
    jc["inputs"] = c.inputs;
    jc["comparisons"] = c.comparisons;
    summary["checks"].push_back(jc);
    all = all && (!c.ran || c.pass);
  }
  summary["all_pass"] = all;

  {
    std::ofstream out(fs::path(dir) / "summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
  }

  for (const auto& c : checks) {
    if (c.csv_header.empty()) continue;
    std::ofstream out(fs::path(dir) / (c.id + ".csv"), std::ios::binary);
    for (size_t i = 0; i < c.csv_header.size(); ++i)
      out << (i ? "," : "") << c.csv_header[i];
    out << "\n";
    for (const auto& r : c.csv_rows) {
      for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
      out << "\n";
    }
  }
}

}  // namespace btq
