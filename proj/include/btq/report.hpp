#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "btq/common.hpp"

namespace btq {

using json = nlohmann::ordered_json;

/// Result of one named check: a pass flag, the comparisons backing it, and
/// the CSV table written next to the summary.
struct CheckRecord {
  std::string id;
  bool pass = true;
  bool ran = true;
  std::string note;
  json inputs = json::object();
  json comparisons = json::array();
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;

  /// Records |measured - reference| <= tolerance and folds it into `pass`.
  /// `provenance` tags the reference value: closed-form, calibration, or
  /// self-consistency-slope.
  bool compare(const std::string& name, double measured, double reference, double tolerance,
               const std::string& provenance = "closed-form");
  /// Records an already-evaluated condition.
  bool require(const std::string& name, bool ok, double measured = 0.0,
               const std::string& provenance = "self-consistency-slope");
  void row(std::initializer_list<double> values);
};

struct Report {
  std::vector<CheckRecord> checks;
  json environment = json::object();

  bool all_pass() const;
  /// Writes summary.json and one <id>.csv per check into `dir`.
  /// Numbers are printed with %.17g and LF endings, so two runs with the
  /// same configuration produce byte-identical files.
  void write(const std::string& dir) const;
};

std::string format_double(double v);

}  // namespace btq
