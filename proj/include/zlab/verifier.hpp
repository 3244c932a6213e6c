#ifndef ZLAB_VERIFIER_HPP
#define ZLAB_VERIFIER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "zlab/bounds.hpp"
#include "zlab/dissection.hpp"
#include "zlab/model.hpp"

namespace zlab {

using Json = nlohmann::ordered_json;

struct RunConfig {
  long N = 48;
  Rational p = Rational(1, 4);
  Rational r = Rational(1, 2);
  int imax = 4;
  double eps = 1.0;
  std::map<int, Rational> couplings;                     // J_i; missing indices are zero
  std::map<long, std::map<int, Rational>> couplings_by_N;  // optional per-N table (Jbar emulation)
  std::vector<long> N_grid;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240501;
  std::uint64_t term_cap = 10'000'000;
  std::uint64_t node_cap = 5'000'000;
  unsigned precision_bits = 200;
  int instances = 100;                 // random draws for verify-partition
  std::vector<Rational> p_scan;        // optional empirical-p0 probe for limit-scan
  std::string out_path;
  std::string format = "json";

  ModelParams params() const;
  ModelParams params_for(long N_value) const;
  CouplingSequence sequence() const;
  CouplingSequence sequence_for(long N_value) const;
  double tolerance(const std::string& name, double fallback) const;
};

RunConfig default_config();
RunConfig limit_scan_defaults();
// Flat JSON document; unknown keys are errors.
RunConfig load_config(const std::string& path);

struct SuiteResult {
  bool pass = false;
  Json report;
};

// Builds the chunk dissection, evaluates, and checks sum == Z bit-exactly;
// then repeats over `instances` seeded random instances.
SuiteResult run_verify_partition(const RunConfig& config);

struct LimitRow {
  long N = 0;
  long budget = 0;
  double lnZ_over_N = 0;
  double lnZstar_over_N = 0;
  double gap = 0;  // |lnZ/N - target|
  double lnT1_over_N = 0;
  double lnT2_abs_over_N = 0;
  int T2_sign = 0;
  double lnT3_abs_over_N = 0;
  int T3_sign = 0;
};

struct LimitReport {
  std::vector<LimitRow> rows;
  double target = 0;
  double extrapolated = 0;  // c0 from c0 + c1/N over the largest half
  double fit_residual = 0;
  double extrapolated_star = 0;
  double t1_gap = 0;        // |lnT1/N - target| at the largest N
  double t2_margin = 0;     // target - lnT2/N at the largest N
  double t3_margin = 0;
  bool gap_monotone = false;
  bool pass = false;
  Json report;
};

LimitReport run_limit_scan(const RunConfig& config);

SuiteResult run_contour_suite(const RunConfig& config);

struct BoundSuiteResult {
  std::vector<BoundReport> reports;
  bool pass = false;
  Json report;
};

BoundSuiteResult run_bound_suite(const RunConfig& config);

Json run_all(const RunConfig& config);

Json chunk_to_json(const Chunk& chunk, const Rational& value);
std::string report_to_csv(const Json& report);
void write_report(const Json& report, const RunConfig& config);

// Deterministic uniform draws independent of the standard library's
// distribution implementations.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound);  // [0, bound)
  double uniform();                          // [0, 1)
};

}  // namespace zlab

#endif
