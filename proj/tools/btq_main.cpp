#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "btq/checks.hpp"

#ifdef BTQ_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t pos = s.find(',', start);
    const std::string tok = s.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!tok.empty()) out.push_back(tok);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* tv = std::getenv("TOEPLITZ_THREADS")) {
    const int n = std::atoi(tv);
    if (n > 0) {
#ifdef BTQ_HAVE_OPENMP
      omp_set_num_threads(n);
#endif
    }
  }

  CLI::App app{"Berezin-Toeplitz quantization workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "btq-out", checks_csv, describe_id;
  unsigned long long seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run checks from a JSON configuration");
  run->add_option("--config", config_path, "path to the JSON configuration")->required();
  run->add_option("--out", out_dir, "output directory for summary.json and CSV tables");
  run->add_option("--checks", checks_csv, "comma-separated check ids overriding the config");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "seed overriding the config");

  CLI::App* list = app.add_subcommand("list-checks", "List available check ids");
  CLI::App* desc = app.add_subcommand("describe", "Describe one check");
  desc->add_option("id", describe_id, "check id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& info : btq::check_catalog())
        std::printf("%-14s %s\n", info.id.c_str(), info.summary.c_str());
      return 0;
    }
    if (desc->parsed()) {
      for (const auto& info : btq::check_catalog())
        if (info.id == describe_id) {
          std::printf("%s: %s\n", info.id.c_str(), info.description.c_str());
          return 0;
        }
      std::fprintf(stderr, "unknown check id '%s'\n", describe_id.c_str());
      return 2;
    }

    btq::RunConfig cfg = btq::parse_config_file(config_path);
    if (!checks_csv.empty()) {
      cfg.checks = split_csv(checks_csv);
      for (const auto& id : cfg.checks)
        if (!btq::known_check(id)) throw btq::ConfigError("unknown check id '" + id + "'");
    }
    if (seed_opt->count() > 0) cfg.seed = seed;

    btq::Report rep = btq::run_checks(cfg);
    rep.write(out_dir);
    for (const auto& c : rep.checks)
      std::printf("%-14s %s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL");
    return rep.all_pass() ? 0 : 1;
  } catch (const btq::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const btq::NumericsError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
