#pragma once

#include <map>
#include <string>
#include <vector>

#include "btq/geometry.hpp"
#include "btq/report.hpp"

namespace btq {

struct GeometrySpec {
  std::string name = "bargmann";
  double param = 1.0;     // bargmann weight a / poincare_disc parameter s
  bool specified = false; // false: multi-geometry checks run all three
};

/// Named symbol constructor for config-level overrides.
struct SymbolSpec {
  std::string kind = "bump";  // bump | cone_bump | gaussian
  double R = 1.0;
  int q = 3;
  cplx c{0.0, 0.0};
  double width = 1.0;
  Symbol make() const;
};

struct RunConfig {
  GeometrySpec geometry;
  std::vector<int> p_list;  // empty: per-check defaults
  int n_radial = 0;         // minimum radial nodes per segment (0 = auto)
  int n_angular = 0;        // minimum angular nodes (0 = auto)
  int truncation = 0;       // forced basis size for the space check (0 = auto)
  std::vector<cplx> probes; // extra probe points (defaults if empty)
  std::vector<std::string> checks{"suite"};
  unsigned long long seed = 1;
  double kappa_shift = 0.0;
  Tolerances tol;
  std::map<std::string, SymbolSpec> symbols;  // per-check symbol overrides
};

/// Parses and schema-validates a JSON config; unknown keys are rejected with
/// a ConfigError naming the field.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const json& j);

struct CheckInfo {
  std::string id;
  std::string summary;      // one line for list-checks
  std::string description;  // the mathematical statement being verified
};

const std::vector<CheckInfo>& check_catalog();
bool known_check(const std::string& id);
/// Expands "suite", validates ids, returns them in catalog order without
/// duplicates.
std::vector<std::string> expand_checks(const std::vector<std::string>& ids);

CheckRecord run_check(const std::string& id, const RunConfig& cfg);
Report run_checks(const RunConfig& cfg);

}  // namespace btq
