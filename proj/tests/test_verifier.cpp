#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "zlab/errors.hpp"
#include "zlab/partition.hpp"
#include "zlab/verifier.hpp"

using namespace zlab;

namespace {

std::string write_temp_config(const std::string& body) {
  const std::string path = "/tmp/zlab_test_config.json";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-12") == Rational(-12));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational(" 1/20 ") == Rational(1, 20));
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK_THROWS_AS(parse_rational(""), ConfigError);
}

TEST_CASE("config loading") {
  SUBCASE("well-formed config round-trips") {
    const std::string path = write_temp_config(R"({
      "N": 64, "p": "1/5", "r": "1/2", "imax": 5, "eps": 1.0,
      "couplings": {"2": "1/4", "3": "-1/8"},
      "N_grid": [100, 200], "seed": 7, "tolerances": {"limit_gap": 1e-3}
    })");
    const RunConfig config = load_config(path);
    CHECK(config.N == 64);
    CHECK(config.p == Rational(1, 5));
    CHECK(config.couplings.at(3) == Rational(-1, 8));
    CHECK(config.N_grid == std::vector<long>{100, 200});
    CHECK(config.tolerance("limit_gap", 0) == 1e-3);
    CHECK(config.tolerance("absent", 42.0) == 42.0);
  }
  SUBCASE("unknown keys are errors") {
    const std::string path = write_temp_config(R"({"couplings": {}, "notakey": 1})");
    CHECK_THROWS_AS(load_config(path), ConfigError);
  }
  SUBCASE("float literals for exact fields are rejected") {
    const std::string path = write_temp_config(R"({"couplings": {}, "p": 0.05})");
    CHECK_THROWS_AS(load_config(path), ConfigError);
  }
  SUBCASE("N_grid must increase strictly") {
    const std::string path = write_temp_config(R"({"couplings": {}, "N_grid": [200, 200]})");
    CHECK_THROWS_AS(load_config(path), ConfigError);
  }
  SUBCASE("missing couplings table is an error") {
    const std::string path = write_temp_config(R"({"N": 10})");
    CHECK_THROWS_AS(load_config(path), ConfigError);
  }
}

TEST_CASE("verify-partition default instance passes with zero gap") {
  RunConfig config = default_config();
  config.instances = 5;
  const SuiteResult result = run_verify_partition(config);
  CHECK(result.pass);
  CHECK(result.report["instance"]["gap"] == "0");
  CHECK(result.report["random_failures"] == 0);
}

TEST_CASE("limit scan with zero couplings sits exactly on the target") {
  RunConfig config = default_config();
  config.couplings.clear();
  for (int i = 2; i <= config.imax; ++i) config.couplings[i] = 0;
  config.N_grid = {40, 80, 120, 160};
  const LimitReport report = run_limit_scan(config);
  CHECK(report.target == 0.0);
  CHECK(report.extrapolated == 0.0);
  for (const LimitRow& row : report.rows) {
    CHECK(row.lnZ_over_N == 0.0);
    CHECK(row.gap == 0.0);
    CHECK(row.lnT1_over_N == 0.0);
    CHECK(row.T2_sign == 0);
    CHECK(row.T3_sign == 0);
  }
}

TEST_CASE("coupling growth violation surfaces before any bound runs") {
  RunConfig config = default_config();
  config.couplings[2] = Rational(101, 100) * pow_rational(config.r, 2);
  CHECK_THROWS_AS(run_bound_suite(config), GrowthViolation);
}

TEST_CASE("identical seeds give byte-identical reports") {
  RunConfig config = default_config();
  config.seed = 424242;
  const BoundSuiteResult first = run_bound_suite(config);
  const BoundSuiteResult second = run_bound_suite(config);
  CHECK(first.report.dump() == second.report.dump());
  CHECK(first.pass);
}

TEST_CASE("csv emission") {
  RunConfig config = default_config();
  config.couplings.clear();
  for (int i = 2; i <= config.imax; ++i) config.couplings[i] = 0;
  config.N_grid = {40, 80};
  const LimitReport report = run_limit_scan(config);
  const std::string csv = report_to_csv(report.report);
  CHECK(csv.find("N,budget,lnZ_over_N") == 0);
  CHECK(csv.find("\n40,") != std::string::npos);
}

TEST_CASE("chunk serialization carries the inspection fields") {
  RunConfig config = default_config();
  config.instances = 1;
  const SuiteResult result = run_verify_partition(config);
  REQUIRE(result.report.contains("chunk_table"));
  const Json& first = result.report["chunk_table"][0];
  for (const char* key : {"level", "kind", "assigned", "residual", "caps", "box", "value"})
    CHECK(first.contains(key));
}

TEST_CASE("per-N coupling table overrides the base table") {
  RunConfig config = default_config();
  config.couplings_by_N[48] = {{2, Rational(0)}, {3, Rational(0)}, {4, Rational(0)}};
  const CouplingSequence base = config.sequence_for(24);
  const CouplingSequence overridden = config.sequence_for(48);
  CHECK(base.at(2) != 0);
  CHECK(overridden.at(2) == 0);
  CHECK(eval_Z(config.params_for(48), overridden).value == 1);
}
