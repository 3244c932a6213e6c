#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "zlab/errors.hpp"
#include "zlab/verifier.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::int64_t seed = -1;
  int precision = 0;
  std::int64_t term_cap = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file (flat key-value)");
  cmd->add_option("--out", flags.out_path, "report output path");
  cmd->add_option("--format", flags.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", flags.seed, "RNG seed");
  cmd->add_option("--precision", flags.precision, "working precision in bits");
  cmd->add_option("--term-cap", flags.term_cap, "admissible-term cap for exact sums");
}

zlab::RunConfig resolve(const CommonFlags& flags, bool limit_defaults) {
  zlab::RunConfig config = flags.config_path.empty()
                               ? (limit_defaults ? zlab::limit_scan_defaults() : zlab::default_config())
                               : zlab::load_config(flags.config_path);
  if (!flags.out_path.empty()) config.out_path = flags.out_path;
  if (!flags.format.empty()) config.format = flags.format;
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.precision > 0) config.precision_bits = static_cast<unsigned>(flags.precision);
  if (flags.term_cap > 0) config.term_cap = static_cast<std::uint64_t>(flags.term_cap);
  return config;
}

int emit(const zlab::Json& report, const zlab::RunConfig& config, bool pass) {
  if (config.out_path.empty()) {
    if (config.format == "csv")
      std::cout << zlab::report_to_csv(report);
    else
      std::cout << report.dump(2) << "\n";
  } else {
    zlab::write_report(report, config);
    std::cout << (pass ? "PASS" : "FAIL") << " -> " << config.out_path << "\n";
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zlab: exact desk-scale checks for a constrained cluster-expansion partition sum"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* verify = app.add_subcommand("verify-partition",
                                    "chunk dissection must reproduce Z bit-exactly");
  auto* limit = app.add_subcommand("limit-scan", "ln Z / N against the target series over an N grid");
  auto* contour = app.add_subcommand("contour-suite", "sum-to-contour identity and deformations");
  auto* bound = app.add_subcommand("bound-suite", "the inequality battery");
  auto* all = app.add_subcommand("all", "every suite in sequence");
  for (CLI::App* cmd : {verify, limit, contour, bound, all}) add_common(cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const zlab::RunConfig config = resolve(flags, false);
      const zlab::SuiteResult result = zlab::run_verify_partition(config);
      return emit(result.report, config, result.pass);
    }
    if (limit->parsed()) {
      const zlab::RunConfig config = resolve(flags, true);
      const zlab::LimitReport result = zlab::run_limit_scan(config);
      return emit(result.report, config, result.pass);
    }
    if (contour->parsed()) {
      const zlab::RunConfig config = resolve(flags, false);
      const zlab::SuiteResult result = zlab::run_contour_suite(config);
      return emit(result.report, config, result.pass);
    }
    if (bound->parsed()) {
      const zlab::RunConfig config = resolve(flags, false);
      const zlab::BoundSuiteResult result = zlab::run_bound_suite(config);
      return emit(result.report, config, result.pass);
    }
    const zlab::RunConfig config = resolve(flags, false);
    const zlab::Json report = zlab::run_all(config);
    return emit(report, config, report["pass"].get<bool>());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
